package shop;

public class Circle extends Base {
    private double r;

    public Circle(double r) {
        super("circle", 1);
        this.r = r;
    }

    public double area() {
        return 3.14159 * r * r;
    }
}
