//! Heights of rational vectors, place by place.
//!
//! ```bash
//! cargo run --example heights -- 3/5 4/5 0
//! ```

use dioapprox::arith::{
    absolute_value, height, height_closed_form, is_s_integral, product_over_places, Place, PlaceSet, Prime, Rational,
    RationalVector,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let coords: Vec<Rational> = if args.is_empty() {
        vec!["3/25".parse()?, "-4/25".parse()?, "24/25".parse()?]
    } else {
        args.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    };
    let x = RationalVector::new(coords)?;
    let (nums, den) = x.reduced();
    println!("x = {x}");
    println!("common denominator {den}, numerators {nums:?}");

    let places = [
        Place::Archimedean,
        Place::prime(2)?,
        Place::prime(3)?,
        Place::prime(5)?,
        Place::prime(7)?,
    ];
    for c in x.coords() {
        let row: Vec<String> = places
            .iter()
            .map(|&v| format!("{v}: {}", absolute_value(c, v).to_f64()))
            .collect();
        println!("  {c:>8}  {}  product {}", row.join("  "), product_over_places(c));
    }

    println!("H(x) over all places  = {}", height(&x));
    println!("max(den, max|num|)    = {}", height_closed_form(&x));
    for p in [2, 3, 5, 7] {
        let s = PlaceSet::single_prime(Prime::new(p)?);
        println!("integral away from {{inf, {p}}}: {}", is_s_integral(&x, &s));
    }
    Ok(())
}
