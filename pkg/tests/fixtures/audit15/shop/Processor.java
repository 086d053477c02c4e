package shop;

public class Processor {
    private Canvas canvas = new Canvas();

    public int process(Status s, int n) {
        int total = 0;
        switch (s) {
            case OPEN:
                total = 1;
                break;
            default:
                total = 2;
        }
        for (int i = 0; i < n; i++) {
            if (i % 2 == 0) {
                canvas.add(new Circle(i));
            }
        }
        return total;
    }
}
