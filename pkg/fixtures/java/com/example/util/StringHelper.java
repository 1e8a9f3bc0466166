package com.example.util;

import java.util.List;
import java.util.Map;
import java.util.HashMap;

/**
 * Small collection of string utilities used across the sample sources.
 */
public final class StringHelper {

    private static final Map<String, String> ALIASES = new HashMap<String, String>();
    private static int sCalls = 0;

    static {
        ALIASES.put("tel", "telephony");
    }

    /**
     * Join the given items with the separator between them.
     *
     * @param items the parts to join
     * @param separator inserted between adjacent parts
     * @return the joined string, empty when items is empty
     */
    public static String join(List<String> items, String separator) {
        StringBuilder sb = new StringBuilder();
        boolean first = true;
        for (String item : items) {
            if (!first) {
                sb.append(separator);
            }
            sb.append(item);
            first = false;
        }
        sCalls++;
        return sb.toString();
    }

    /**
     * Count how many times the character appears in the text.
     */
    public static int countChar(String text, char wanted) {
        int n = 0;
        for (int i = 0; i < text.length(); i++) {
            if (text.charAt(i) == wanted) {
                n++;
            }
        }
        return n;
    }

    /**
     * Render the low byte of the value as two hexadecimal characters.
     */
    public static String hexByte(int value) {
        int masked = value & 0xFF;
        char[] digits = new char[2];
        digits[0] = hexDigit((masked >> 4) & 0xF);
        digits[1] = hexDigit(masked & 0xF);
        return new String(digits);
    }

    /**
     * Look up a canonical name for the alias, falling back to the alias
     * itself when nothing is registered.
     */
    public static String canonical(String alias) {
        String hit = ALIASES.get(alias);
        return hit == null ? alias : hit;
    }

    private static char hexDigit(int v) {
        return (char) (v < 10 ? '0' + v : 'a' + (v - 10));
    }
}
