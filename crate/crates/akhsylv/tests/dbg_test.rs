use akhsylv::akhiezer::*;
use akhsylv::cutdomain::*;
use num_complex::Complex64;

#[test]
fn dbg_ladder() {
    let iv = Interval::new(2.5, 4.8).unwrap();
    let spec = WeightSpec::chebyshev(iv);
    let data = AkhiezerData::with_depth(spec, 400).unwrap();
    let table = &data.table;
    let z = Complex64::new(0.0, 0.0);
    let (count, start) = (30usize, 215usize);
    let mut y_next = Complex64::new(0.0, 0.0);
    let mut y = Complex64::new(1.0, 0.0);
    let mut out = vec![Complex64::new(0.0, 0.0); count];
    if start - 1 < count { out[start-1] = y; }
    for j in (1..start).rev() {
        let y_prev = ((z - table.a(j)) * y - table.b(j) * y_next) / table.b(j - 1);
        y_next = y;
        y = y_prev;
        if j - 1 < count { out[j-1] = y; }
        if [214, 200, 150, 100, 50, 30, 10, 1].contains(&j) {
            println!("j={j}: y={:.3e}", y.norm());
        }
        if y.norm() > 1e250 {
            let s = 1e-250;
            y *= s; y_next *= s;
            for v in out.iter_mut() { *v *= s; }
        }
    }
    println!("out[0]={:.3e} out[29]={:.3e}", out[0].norm(), out[29].norm());
}
