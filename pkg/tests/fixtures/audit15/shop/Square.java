package shop;

public class Square extends Base {
    private double side;

    public Square(double side) {
        super("square", 2);
        this.side = side;
    }

    public double area() {
        return side * side;
    }

    public double diagonal() {
        return Math.sqrt(2) * side;
    }
}
