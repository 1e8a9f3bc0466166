package android.content;

/**
 * Proxying implementation of Context that simply delegates all of its
 * calls to another Context.
 */
public class ContextWrapper extends Context {

    private Context mBase;

    public ContextWrapper(Context base) {
        mBase = base;
    }

    public Object getSystemService(String name) {
        return mBase.getSystemService(name);
    }

    public void sendBroadcast(Intent intent) {
        mBase.sendBroadcast(intent);
    }

    /**
     * Set the base context for this ContextWrapper.  All calls will then
     * be delegated to the base context.
     *
     * @param base the new base context for this wrapper
     */
    protected void attachBaseContext(Context base) {
        if (mBase != null) {
            throw new IllegalStateException("Base context already set");
        }
        mBase = base;
    }
}
