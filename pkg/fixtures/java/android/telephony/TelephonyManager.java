package android.telephony;

/**
 * Provides access to information about the telephony services on the device.
 */
public class TelephonyManager {

    private static final int SIM_STATE_READY = 5;

    /**
     * Returns the unique device ID, for example, the IMEI for GSM and
     * the MEID or ESN for CDMA phones.
     *
     * @return the unique device ID, null if the device ID is not available
     */
    public String getDeviceId() {
        return fetchIdentity("device");
    }

    /**
     * Returns the unique subscriber ID, for example, the IMSI for a GSM
     * phone.
     *
     * @return the unique subscriber ID, null if it is unavailable
     */
    public String getSubscriberId() {
        return fetchIdentity("subscriber");
    }

    /**
     * Returns the serial number of the SIM, if applicable.
     */
    public String getSimSerialNumber() {
        return fetchIdentity("iccid");
    }

    /**
     * Returns the ISO country code equivalent for the SIM provider's
     * country code.
     */
    public String getSimCountryIso() {
        String raw = fetchIdentity("country");
        if (raw == null) {
            return "";
        }
        return raw.toLowerCase();
    }

    /**
     * Returns the software version number for the device, for example,
     * the IMEI/SV for GSM phones.
     */
    public String getDeviceSoftwareVersion() {
        return fetchIdentity("swversion");
    }

    /**
     * Returns true if a ICC card is present.
     */
    public boolean hasIccCard() {
        return simState() == SIM_STATE_READY;
    }

    /**
     * Registers a listener object to receive notification of changes in
     * specified telephony states.
     *
     * @param listener the listener object to register
     * @param events the telephony state changes the listener is interested in
     */
    public void listen(PhoneStateListener listener, int events) {
        ListenerRegistry registry = ListenerRegistry.get();
        registry.add(listener, events);
    }

    private String fetchIdentity(String what) {
        IdentityStore store = IdentityStore.open();
        String value = store.read(what);
        store.close();
        return value;
    }

    private int simState() {
        IdentityStore store = IdentityStore.open();
        int state = store.readState();
        store.close();
        return state;
    }
}
