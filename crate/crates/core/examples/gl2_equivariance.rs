//! `Det(g . A) = g . Det(A)` for `g` in GL2(Z), and invariance under `(g1, g2)`.

use binform::groups::{g_act_tensor, gl2_act_form, gl2_act_tensor, GL2Elem};
use binform::sampling::{random_gl2, random_gpair, random_tensor, trial_rng};

fn main() -> binform::Result<()> {
    let mut rng = trial_rng(1, "gl2_example", 0);
    let a = random_tensor(3, 4, &mut rng);
    let f = a.det_form()?;
    println!("Det(A) = {:?}", f.coeffs());

    let g = GL2Elem::from_i64(2, 1, 1, 1)?;
    let moved = gl2_act_tensor(&g, &a);
    println!("g = (2 1; 1 1): Det(g.A) = {:?}", moved.det_form()?.coeffs());
    println!("              g.Det(A) = {:?}", gl2_act_form(&g, &f).coeffs());

    let mut agree = 0;
    for _ in 0..200 {
        let g = random_gl2(10, &mut rng);
        let h = random_gpair(3, 10, &mut rng);
        let ok_gl2 = gl2_act_tensor(&g, &a).det_form()? == gl2_act_form(&g, &f);
        let ok_g = g_act_tensor(&h, &a)?.det_form()? == f;
        agree += usize::from(ok_gl2 && ok_g);
    }
    println!("random group elements respecting both laws: {agree}/200");
    Ok(())
}
