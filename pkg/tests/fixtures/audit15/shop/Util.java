package shop;

public final class Util {
    private Util() {
    }

    /* Index of the first negative entry, or -1. */
    public static int firstNegative(int[] xs) {
        int i = 0;
        while (i < xs.length) {
            if (xs[i] < 0) {
                break;
            }
            i++;
        }
        if (i == xs.length) {
            return -1;
        }
        return i;
    }
}
