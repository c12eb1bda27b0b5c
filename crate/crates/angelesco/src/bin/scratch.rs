use angelesco::modelrhp::psi_asymptotic_check;
use angelesco::prec::Prec;

fn main() {
    let p = Prec::digits(30);
    for order in [0usize, 1] {
        let rep = psi_asymptotic_check(&[16.0, 64.0, 256.0], 1.1, &p.f(0.7), &p.f(0.5), order, 30).unwrap();
        print!("order {order}: remainders");
        for r in &rep.remainders {
            print!(" {:.3e}", r.to_f64());
        }
        println!("  fitted decay {:.4}", rep.fitted_decay.to_f64());
    }
    // tau = 0: order 0 vs order 1 identical
    for order in [0usize, 1] {
        let rep = psi_asymptotic_check(&[16.0, 64.0], 1.1, &p.zero(), &p.f(0.5), order, 30).unwrap();
        println!("tau=0 order {order}: {:.6e} {:.6e}", rep.remainders[0].to_f64(), rep.remainders[1].to_f64());
    }
}
