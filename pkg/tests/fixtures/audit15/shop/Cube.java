package shop;

public class Cube extends Square {
    public Cube(double side) {
        super(side);
    }

    // six faces
    public double area() {
        return 6 * super.area();
    }
}
