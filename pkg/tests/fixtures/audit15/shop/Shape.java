package shop;

/** Anything with an area. */
public interface Shape {
    double area();

    String name();
}
