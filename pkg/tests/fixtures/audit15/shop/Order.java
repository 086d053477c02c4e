package shop;

public class Order {
    private Line head;

    public Order() {
        head = new Line(1);
    }

    public int size() {
        return head.qty;
    }

    public static class Line {
        public int qty;

        public Line(int qty) {
            this.qty = qty;
        }
    }
}
