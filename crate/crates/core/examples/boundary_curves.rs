use pcubed::prelude::*;

fn main() {
    let bs = [0.05, 0.1, 0.2, 0.3, 0.4];
    print!("{:>11}", "b");
    for b in bs {
        print!("{b:>9}");
    }
    println!();
    for kind in CurveKind::ALL {
        print!("{:>11}", kind.name());
        for b in bs {
            match boundary_curve(kind, b) {
                Ok(c) => print!("{c:>9.4}"),
                Err(_) => print!("{:>9}", "-"),
            }
        }
        println!();
    }
}
