package android.location;

import java.util.List;
import java.util.ArrayList;

/**
 * This class provides access to the system location services.  These
 * services allow applications to obtain periodic updates of the
 * device's geographical location.
 */
public class LocationManager {

    /**
     * Returns a Location indicating the data from the last known
     * location fix obtained from the given provider.
     *
     * @param provider the name of the provider
     * @return the last known location for the provider, or null
     */
    public Location getLastKnownLocation(String provider) {
        ProviderSlot slot = findSlot(provider);
        if (slot == null) {
            return null;
        }
        return slot.lastFix();
    }

    /**
     * Register for location updates from the given provider.
     *
     * @param provider the name of the provider with which to register
     * @param minTime minimum time interval between location updates, in milliseconds
     * @param minDistance minimum distance between location updates, in meters
     * @param listener the listener whose onLocationChanged method will be called
     */
    public void requestLocationUpdates(String provider, long minTime, float minDistance, LocationListener listener) {
        ProviderSlot slot = findSlot(provider);
        if (slot == null) {
            throw new IllegalArgumentException("no such provider");
        }
        slot.attach(listener, minTime, minDistance);
    }

    /**
     * Removes any current registration for location updates of the
     * current activity with the given LocationListener.
     *
     * @param listener the listener to remove
     */
    public void removeUpdates(LocationListener listener) {
        List<ProviderSlot> slots = allSlots();
        for (ProviderSlot slot : slots) {
            slot.detach(listener);
        }
    }

    /**
     * Returns the current enabled/disabled status of the given provider.
     *
     * @param provider the name of the provider
     * @return true if the provider is enabled
     */
    public boolean isProviderEnabled(String provider) {
        ProviderSlot slot = findSlot(provider);
        return slot != null && slot.enabled();
    }

    /**
     * Returns a list of the names of all known location providers.
     */
    public List<String> getAllProviders() {
        List<String> names = new ArrayList<String>();
        for (ProviderSlot slot : allSlots()) {
            names.add(slot.name());
        }
        return names;
    }

    private ProviderSlot findSlot(String provider) {
        for (ProviderSlot slot : allSlots()) {
            if (slot.name().equals(provider)) {
                return slot;
            }
        }
        return null;
    }

    private List<ProviderSlot> allSlots() {
        return SlotTable.snapshot();
    }
}
