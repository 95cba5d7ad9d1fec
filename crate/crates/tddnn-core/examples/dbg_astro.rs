use astro_float::{BigFloat, Consts, RoundingMode};

fn main() {
    let p = 192usize;
    let rm = RoundingMode::ToEven;
    let mut cc = Consts::new().unwrap();
    let x = BigFloat::from_f64(1.5, p);
    let s = x.sinh(p, rm, &mut cc);
    let c = x.cosh(p, rm, &mut cc);
    let ratio = s.div(&c, p, rm);
    let t = x.tanh(p, rm, &mut cc);
    let diff = ratio.sub(&t, p, rm);
    println!("sinh(1.5)={s}");
    println!("tanh diff = {diff}");
    let back: f64 = <f64 as std::convert::TryFrom<_>>::try_from(...);
}
