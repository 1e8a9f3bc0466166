package android.database;

/**
 * This interface provides random read-write access to the result set
 * returned by a database query.
 */
public interface Cursor {

    /**
     * Returns the value of the requested column as a String.
     *
     * @param columnIndex the zero-based index of the target column
     * @return the value of that column as a String
     */
    String getString(int columnIndex);

    /**
     * Returns the value of the requested column as an int.
     *
     * @param columnIndex the zero-based index of the target column
     * @return the value of that column as an int
     */
    int getInt(int columnIndex);

    /**
     * Move the cursor to the next row.
     *
     * @return whether the move succeeded
     */
    boolean moveToNext();

    /**
     * Closes the Cursor, releasing all of its resources and making it
     * completely invalid.
     */
    void close();
}
