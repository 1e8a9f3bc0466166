package android.content;

/**
 * Interface to global information about an application environment.
 */
public abstract class Context {

    /**
     * Return the handle to a system-level service by name.  The class of
     * the returned object varies by the requested name.
     *
     * @param name the name of the desired service
     * @return the service or null if the name does not exist
     */
    public abstract Object getSystemService(String name);

    /**
     * Broadcast the given intent to all interested BroadcastReceivers.
     * This call is asynchronous; it returns immediately.
     *
     * @param intent the Intent to broadcast
     */
    public abstract void sendBroadcast(Intent intent);

    /**
     * Determine whether the given permission is allowed for a particular
     * process and user ID running in the system.
     *
     * @param permission the name of the permission being checked
     * @param pid the process ID being checked against
     * @param uid the user ID being checked against
     * @return PERMISSION_GRANTED if the given pid/uid is allowed that permission
     */
    public int checkPermission(String permission, int pid, int uid) {
        if (permission == null) {
            return -1;
        }
        PermissionTable table = PermissionTable.system();
        return table.lookup(permission, pid, uid);
    }
}
