package android.database.sqlite;

import android.database.Cursor;

/**
 * A Cursor implementation that exposes results from a query on a
 * SQLiteDatabase.
 */
public class SQLiteCursor implements Cursor {

    private RowWindow mWindow;
    private int mPos;

    public String getString(int columnIndex) {
        return mWindow.stringAt(mPos, columnIndex);
    }

    public int getInt(int columnIndex) {
        return mWindow.intAt(mPos, columnIndex);
    }

    public boolean moveToNext() {
        if (mPos + 1 >= mWindow.rowCount()) {
            return false;
        }
        mPos = mPos + 1;
        return true;
    }

    public void close() {
        mWindow.release();
        mWindow = null;
    }

    /**
     * Returns the number of rows exposed by this cursor.
     */
    public int getCount() {
        return mWindow.rowCount();
    }
}
