package android.telephony;

import android.app.PendingIntent;
import java.util.ArrayList;

/**
 * Manages SMS operations such as sending data and text messages.
 */
public class SmsManager {

    private static SmsManager sInstance;

    /**
     * Get the default instance of the SmsManager.
     *
     * @return the default instance of the SmsManager
     */
    public static SmsManager getDefault() {
        if (sInstance == null) {
            sInstance = new SmsManager();
        }
        return sInstance;
    }

    /**
     * Send a text based SMS to the given destination.
     *
     * <p>The destination address and the message body leave the device
     * over the cellular network.</p>
     *
     * @param destinationAddress the address to send the message to
     * @param scAddress the service center address or null
     * @param text the body of the message to send
     * @param sentIntent broadcast when the message is sent
     * @param deliveryIntent broadcast when the message is delivered
     */
    public void sendTextMessage(String destinationAddress, String scAddress, String text, PendingIntent sentIntent, PendingIntent deliveryIntent) {
        checkDestination(destinationAddress);
        if (text == null) {
            throw new IllegalArgumentException("Invalid message body");
        }
        dispatch(destinationAddress, scAddress, text, 0);
    }

    /**
     * Send a data based SMS to a specific application port.
     *
     * @param destinationAddress the address to send the message to
     * @param scAddress the service center address or null
     * @param destinationPort the port to deliver the message to
     * @param data the body of the message to send
     * @param sentIntent broadcast when the message is sent
     * @param deliveryIntent broadcast when the message is delivered
     */
    public void sendDataMessage(String destinationAddress, String scAddress, short destinationPort, byte[] data, PendingIntent sentIntent, PendingIntent deliveryIntent) {
        checkDestination(destinationAddress);
        if (data == null || data.length == 0) {
            throw new IllegalArgumentException("Invalid message data");
        }
        dispatch(destinationAddress, scAddress, encode(data), destinationPort);
    }

    /**
     * Send a multi-part text based SMS.  The message is split into
     * several fragments and transmitted in order.
     *
     * @param destinationAddress the address to send the message to
     * @param scAddress the service center address or null
     * @param parts an ArrayList of strings that make up the message
     */
    public void sendMultipartTextMessage(String destinationAddress, String scAddress, ArrayList<String> parts) {
        checkDestination(destinationAddress);
        for (String part : parts) {
            dispatch(destinationAddress, scAddress, part, 0);
        }
    }

    /**
     * Divide a message text into several fragments, none bigger than
     * the maximum SMS message size.
     *
     * @param text the original message
     * @return an ArrayList of strings that, in order, comprise the original message
     */
    public ArrayList<String> divideMessage(String text) {
        ArrayList<String> parts = new ArrayList<String>();
        int offset = 0;
        while (offset < text.length()) {
            int end = min(offset + 140, text.length());
            parts.add(text.substring(offset, end));
            offset = end;
        }
        return parts;
    }

    /**
     * Validate a destination address before use.
     */
    private void checkDestination(String destinationAddress) {
        if (destinationAddress == null) {
            throw new IllegalArgumentException("Invalid destinationAddress");
        }
    }

    private void dispatch(String destinationAddress, String scAddress, String text, int port) {
        RadioChannel channel = RadioChannel.open(port);
        channel.write(destinationAddress, scAddress, text);
        channel.close();
    }

    private String encode(byte[] data) {
        StringBuilder sb = new StringBuilder();
        for (int i = 0; i < data.length; i++) {
            sb.append((int) data[i]);
        }
        return sb.toString();
    }

    private int min(int a, int b) {
        return a < b ? a : b;
    }
}
