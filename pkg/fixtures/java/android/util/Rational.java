package android.util;

/**
 * An immutable data type representation of a rational number.
 */
public final class Rational {

    private final int mNumerator;
    private final int mDenominator;

    /**
     * Create a rational with the given numerator and denominator.
     *
     * @param numerator the numerator of the rational
     * @param denominator the denominator of the rational
     */
    public Rational(int numerator, int denominator) {
        if (denominator == 0) {
            throw new IllegalArgumentException("denominator must not be zero");
        }
        int g = gcd(numerator, denominator);
        mNumerator = numerator / g;
        mDenominator = denominator / g;
    }

    /**
     * Returns the value of the specified number as an int.
     *
     * <p>The rational value is rounded towards zero.</p>
     *
     * @return the divided value of the numerator and denominator as an int
     */
    public int intValue() {
        return mNumerator / mDenominator;
    }

    /**
     * Returns the value of the specified number as a float.
     */
    public float floatValue() {
        return (float) mNumerator / (float) mDenominator;
    }

    /**
     * Returns the value of the specified number as a double.
     */
    public double doubleValue() {
        return (double) mNumerator / (double) mDenominator;
    }

    /**
     * Returns the numerator of this rational.
     */
    public int getNumerator() {
        return mNumerator;
    }

    /**
     * Returns the denominator of this rational.
     */
    public int getDenominator() {
        return mDenominator;
    }

    /**
     * Returns a string representation of this rational, for example "3/4".
     */
    public String toString() {
        StringBuilder sb = new StringBuilder();
        sb.append(mNumerator);
        sb.append('/');
        sb.append(mDenominator);
        return sb.toString();
    }

    private static int gcd(int a, int b) {
        int x = a < 0 ? -a : a;
        int y = b < 0 ? -b : b;
        while (y != 0) {
            int t = y;
            y = x % y;
            x = t;
        }
        return x == 0 ? 1 : x;
    }
}
