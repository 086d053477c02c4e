package shop;

public class Point {
    public int x;
    public int y;
    public static int count;
}
