use num_traits::{One, Zero};
use rand::Rng as _;
use serde_json::{json, Value};

use super::gen::{self, Rng};
use super::{regressions, run, Trial};
use crate::band::{band_of, infinity_of, pi, BandProjection};
use crate::cond_exp::{gram_matrix, real_is_psd, CondExp, XMatrix};
use crate::element::Element;
use crate::error::Result;
use crate::ext::{int, rat, ExtValue, Rational};
use crate::fls::{corollary_m10, m5_limit_check, theorem_m7, BoundDoc, Upto, WeightedEventSeq};
use crate::parts::{component, finite_part, infinite_part, mul_decompose, star};
use crate::sequences::{FiniteDirectedGrid, PeriodicSeq};

type Suite = fn(&mut Rng) -> Trial;

const SUITES: [Suite; 25] = [
    yy2_a, yy2_q, yy2_h, yy2_k, yy2_t, yy2_e, x1, x4, yy2_jm, yy2_q_star, yy2_r, l1, yy2_t_products, yy3_a, yy2_p,
    yy2_g, yy2_b, m1, m2, m3, m4, m5, m6, m7_cert, bc,
];

pub(super) fn suite(idx: usize) -> Suite {
    SUITES[idx]
}

fn sum_seq(x: &PeriodicSeq<Element>, y: &PeriodicSeq<Element>) -> Result<PeriodicSeq<Element>> {
    x.try_zip_with(y, |a, b| a.add(b))
}

fn prod_seq(x: &PeriodicSeq<Element>, y: &PeriodicSeq<Element>) -> Result<PeriodicSeq<Element>> {
    x.try_zip_with(y, |a, b| a.mul(b))
}

fn scaled_seq(u: &Element, x: &PeriodicSeq<Element>) -> Result<PeriodicSeq<Element>> {
    x.try_map(|a| u.mul(a))
}

fn band_sub(rng: &mut Rng, b: &BandProjection) -> BandProjection {
    let atoms: Vec<usize> = b.atoms().filter(|_| rng.gen_bool(0.5)).collect();
    BandProjection::new(b.dim(), atoms).expect("in range")
}

fn le(a: &Element, b: &Element) -> Result<bool> {
    a.leq(b)
}

fn x_and_n(x: &Element, n: i64) -> Element {
    x.meet(&Element::constant(x.dim(), int(n))).expect("same dimension")
}

fn seq_instance(seq: &WeightedEventSeq) -> Value {
    json!(BoundDoc::from_seq(seq, vec![]))
}

fn yy2_a(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let b = gen::band(rng, d);
    let bd = b.complement();
    let x = gen::seq_with(rng, |r| b.apply(&gen::cone(r, d)).unwrap());
    let y = gen::seq_with(rng, |r| bd.apply(&gen::cone(r, d)).unwrap());
    let m = rng.gen_range(1..=3);
    let gx = FiniteDirectedGrid::from_fn(m, |_, _| b.apply(&gen::cone(rng, d)).unwrap()).unwrap();
    let gy = FiniteDirectedGrid::from_fn(m, |_, _| bd.apply(&gen::cone(rng, d)).unwrap()).unwrap();
    run(json!({"band": b, "x": x, "y": y, "grid_x": gx, "grid_y": gy}), |c| {
        let s = sum_seq(&x, &y)?;
        c.check("sup of sum", s.sup() == x.sup().add(&y.sup())?);
        c.check("inf of sum", s.inf() == x.inf().add(&y.inf())?);
        c.check("limsup of sum", s.limsup() == x.limsup().add(&y.limsup())?);
        c.check("liminf of sum", s.liminf() == x.liminf().add(&y.liminf())?);
        let g = gx.try_zip_with(&gy, |a, b| a.add(b))?;
        c.check("grid sup of sum", g.sup() == gx.sup().add(&gy.sup())?);
        c.check("grid inf of sum", g.inf() == gx.inf().add(&gy.inf())?);
        c.check("grid limsup of sum", g.limsup() == gx.limsup().add(&gy.limsup())?);
        c.check("grid liminf of sum", g.liminf() == gx.liminf().add(&gy.liminf())?);
        c.check("pairwise disjointness is not enough", regressions::pairwise_disjoint_sup_fails());
        Ok(())
    })
}

fn running_inf(rs: &[Element]) -> Vec<Element> {
    rs.iter()
        .scan(None::<Element>, |acc, r| {
            let next = match acc {
                None => r.clone(),
                Some(a) => a.meet(r).unwrap(),
            };
            *acc = Some(next.clone());
            Some(next)
        })
        .collect()
}

fn yy2_q(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let m = rng.gen_range(1..=3);
    let rs: Vec<Element> = (0..=2 * m).map(|_| gen::cone(rng, d)).collect();
    let ss: Vec<Element> = (0..=2 * m).map(|_| gen::cone(rng, d)).collect();
    let (ix, iy) = (running_inf(&rs), running_inf(&ss));
    let gx = FiniteDirectedGrid::from_fn(m, |i, j| ix[i + j].clone()).unwrap();
    let gy = FiniteDirectedGrid::from_fn(m, |i, j| iy[i + j].clone()).unwrap();
    let to_seq = |v: &[Element]| PeriodicSeq::new(v[..v.len() - 1].to_vec(), vec![v[v.len() - 1].clone()]).unwrap();
    let (x, y) = (to_seq(&ix), to_seq(&iy));
    run(json!({"grid_x": gx, "grid_y": gy}), |c| {
        c.check("grids are decreasing", gx.is_decreasing() && gy.is_decreasing());
        let g = gx.try_zip_with(&gy, |a, b| a.add(b))?;
        c.check("grid inf of sum", g.inf() == gx.inf().add(&gy.inf())?);
        let s = sum_seq(&x, &y)?;
        c.check("sequence inf of sum", s.inf() == x.inf().add(&y.inf())?);
        Ok(())
    })
}

fn yy2_h(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let (x, y) = (gen::cone(rng, d), gen::cone(rng, d));
    let a_fin = gen::finite_cone(rng, d);
    let a_any = gen::cone(rng, d);
    let below = gen::cone(rng, d);
    run(json!({"x": x, "y": y, "a": a_fin, "b": a_any, "w": below}), |c| {
        let (xf, xi) = (finite_part(&x), infinite_part(&x));
        let (yf, yi) = (finite_part(&y), infinite_part(&y));

        let s = x.add(&y)?;
        c.check("H(i) infinite part of sum", infinite_part(&s) == xi.add(&yi)?);
        c.check("H(i) finite part of sum", le(&finite_part(&s), &xf.add(&yf)?)?);
        if x.disjoint(&y)? {
            c.check("H(i) disjoint equality", finite_part(&s) == xf.add(&yf)?);
        }

        let j = x.join(&y)?;
        c.check("H(ii) infinite part of join", infinite_part(&j) == xi.join(&yi)?);
        c.check("H(ii) join of infinite parts is their sum", xi.join(&yi)? == xi.add(&yi)?);
        let pyd = band_of(&yi).complement();
        let pxd = band_of(&xi).complement();
        c.check("H(ii) finite part of join", finite_part(&j) == pyd.apply(&xf)?.join(&pxd.apply(&yf)?)?);

        let m = x.meet(&y)?;
        c.check("H(iii) infinite part of meet", infinite_part(&m) == xi.meet(&yi)?);
        let expect = xf.meet(&yf)?.add(&xf.meet(&yi)?)?.add(&xi.meet(&yf)?)?;
        c.check("H(iii) finite part of meet", finite_part(&m) == expect);

        let p = x.mul(&y)?;
        c.check("H(iv) finite part of product", finite_part(&p) == xf.mul(&yf)?);
        let expect = xf.mul(&yi)?.add(&xi.mul(&yf)?)?.add(&xi.mul(&yi)?)?;
        c.check("H(iv) infinite part of product", infinite_part(&p) == expect);

        let bigger = x.add(&a_any)?;
        c.check("o: infinite part is increasing", le(&xi, &infinite_part(&bigger))?);
        let shifted = x.add(&a_fin)?;
        let sf = finite_part(&shifted);
        c.check("o: finite shift keeps finite parts ordered", le(&xf, &sf)?);
        let correction = band_of(&infinite_part(&shifted)).complement().apply(&a_fin)?;
        c.check("o: finite part after shift", xf == sf.sub(&correction)?);
        c.check("o: finite part is not increasing in general", regressions::finite_part_not_monotone());

        let b = band_of(&xi).apply(&below)?;
        for n in [1, 2, 10, 100] {
            c.check("v: multiples stay below the infinite part", le(&b.scale(&int(n))?, &xi)?);
        }
        Ok(())
    })
}

fn yy2_k(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let x = gen::seq_with(rng, |r| gen::element(r, d));
    let y = gen::element(rng, d);
    run(json!({"x": x, "y": y}), |c| {
        let s = x.try_map(|a| y.add(a))?;
        c.check("k(i) sup", s.sup() == y.add(&x.sup())?);
        c.check("k(ii) inf", s.inf() == y.add(&x.inf())?);
        c.check("k(iii) limsup", s.limsup() == y.add(&x.limsup())?);
        c.check("k(iv) liminf", s.liminf() == y.add(&x.liminf())?);
        Ok(())
    })
}

fn yy2_t(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let x = gen::seq_with(rng, |r| gen::element(r, d));
    let y = gen::seq_with(rng, |r| gen::element(r, d));
    let lim = gen::element(rng, d);
    let y_conv = PeriodicSeq::new((0..rng.gen_range(0..=3)).map(|_| gen::element(rng, d)).collect(), vec![lim])
        .unwrap();
    run(json!({"x": x, "y": y, "convergent_y": y_conv}), |c| {
        let s = sum_seq(&x, &y)?;
        c.check("T(i) lower", le(&x.liminf().add(&y.liminf())?, &s.liminf())?);
        c.check("T(i) upper", le(&s.liminf(), &x.liminf().add(&y.limsup())?)?);
        c.check("T middle", le(&x.liminf().add(&y.limsup())?, &s.limsup())?);
        c.check("T(ii)", le(&s.limsup(), &x.limsup().add(&y.limsup())?)?);
        let limit = y_conv.order_limit().expect("eventually constant");
        c.check("T(iii)", sum_seq(&x, &y_conv)?.liminf() == x.liminf().add(&limit)?);
        Ok(())
    })
}

fn yy2_e(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let x = gen::seq_with(rng, |r| gen::cone(r, d));
    let uf = gen::finite_cone(rng, d);
    let w = gen::cone(rng, d);
    let b_inf = band_sub(rng, &band_of(&x.inf()));
    let b_sup = band_sub(rng, &band_of(&x.limsup()));
    let b_lim = band_sub(rng, &band_of(&x.liminf()));
    run(json!({"x": x, "u_finite": uf, "w": w, "b_inf": b_inf, "b_limsup": b_sup, "b_liminf": b_lim}), |c| {
        let u = uf.add(&infinity_of(&b_inf))?;
        c.check("E(i)", scaled_seq(&u, &x)?.inf() == u.mul(&x.inf())?);
        let ib = infinity_of(&b_inf);
        c.check("E(i)(a)", scaled_seq(&ib, &x)?.inf() == ib && ib.mul(&x.inf())? == ib);
        c.check("E(i)(b)", scaled_seq(&uf, &x)?.inf() == uf.mul(&x.inf())?);

        let u = uf.add(&infinity_of(&b_sup))?;
        c.check("E(ii)", scaled_seq(&u, &x)?.limsup() == u.mul(&x.limsup())?);
        let ib = infinity_of(&b_sup);
        c.check("E(ii) band case", scaled_seq(&ib, &x)?.limsup() == ib.mul(&x.limsup())?);

        let u = uf.add(&infinity_of(&b_lim))?;
        c.check("E(iii)", scaled_seq(&u, &x)?.liminf() == u.mul(&x.liminf())?);
        let ib = infinity_of(&b_lim);
        c.check("E(iii) band case", scaled_seq(&ib, &x)?.liminf() == ib && ib.mul(&x.liminf())? == ib);

        let bound = infinite_part(&w).add(&finite_part(&w).mul(&x.inf())?)?;
        c.check("W: unconditional bound", le(&scaled_seq(&w, &x)?.inf(), &bound)?);
        c.check("W: the band condition cannot be dropped", regressions::remark_w());
        c.check("j: sup commutes with multiplication", scaled_seq(&w, &x)?.sup() == w.mul(&x.sup())?);
        Ok(())
    })
}

fn x1(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let pairs = gen::seq_with(rng, |r| {
        let b = gen::band(r, d);
        let x = b.apply(&gen::cone(r, d)).unwrap();
        (b, x)
    });
    let bands = pairs.map(|(b, _)| b.clone());
    let xs = pairs.map(|(_, x)| x.clone());
    run(json!({"bands": bands, "x": xs}), |c| {
        c.check("sup", band_of(&xs.sup()).leq(&bands.tail_sup(0))?);
        c.check("inf", band_of(&xs.inf()).leq(&bands.tail_inf(0))?);
        c.check("limsup", band_of(&xs.limsup()).leq(&bands.limsup())?);
        c.check("liminf", band_of(&xs.liminf()).leq(&bands.liminf())?);
        Ok(())
    })
}

fn x4_reverse_applies(x: &PeriodicSeq<Element>, y: &PeriodicSeq<Element>) -> Result<bool> {
    let horizon = x.prefix_len().max(y.prefix_len()) + x.cycle_len() * y.cycle_len();
    let mut first = false;
    for beta in 0..=horizon {
        let tail = band_of(&infinite_part(&x.tail_sup(beta)));
        first |= tail.leq(&band_of(&y.tail_inf(beta)))?;
    }
    let second = band_of(&infinite_part(&y.liminf())).leq(&band_of(&x.limsup()))?;
    Ok(first && second)
}

fn x4(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let x = gen::seq_with(rng, |r| gen::cone(r, d));
    let y = gen::seq_with(rng, |r| gen::cone(r, d));
    let xf = gen::seq_with(rng, |r| gen::finite_cone(r, d));
    let yf = gen::seq_with(rng, |r| gen::finite_cone(r, d));
    run(json!({"x": x, "y": y, "x_finite": xf, "y_finite": yf}), |c| {
        for (a, b) in [(&x, &y), (&xf, &yf), (&x, &yf), (&xf, &y)] {
            let p = prod_seq(a, b)?;
            c.check("X4 lower bound", le(&a.limsup().mul(&b.liminf())?, &p.limsup())?);
            if x4_reverse_applies(a, b)? {
                c.check("X4 reverse bound", le(&p.liminf(), &a.limsup().mul(&b.liminf())?)?);
            }
        }
        Ok(())
    })
}

fn yy2_jm(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let (x, y) = (gen::element(rng, d), gen::element(rng, d));
    let (xc, yc) = (gen::cone(rng, d), gen::cone(rng, d));
    let (xfin, yfin) = (gen::finite(rng, d), gen::finite(rng, d));
    let b = gen::band(rng, d);
    let lambda = gen::positive(rng);
    let bump = gen::cone(rng, d);
    let w = gen::weak_unit(rng, d);
    let p = band_sub(rng, &band_of(&xc));
    let inst = json!({"x": x, "y": y, "x_cone": xc, "y_cone": yc, "x_finite": xfin, "y_finite": yfin,
        "band": b, "lambda": lambda.to_string(), "bump": bump, "weak_unit": w, "sub_band": p});
    run(inst, |c| {
        c.check("Jm(i) zero", star(&Element::zero(d)).is_zero());
        c.check("Jm(i) infinity", star(&infinity_of(&b)).is_zero());

        let inv = Rational::one() / &lambda;
        c.check("Jm(ii) positive", star(&x.scale(&lambda)?) == star(&x).scale(&inv)?);
        c.check("Jm(ii) negative", star(&xfin.scale(&-lambda.clone())?) == star(&xfin).scale(&-inv)?);

        let xd = b.apply(&x)?;
        let yd = b.complement().apply(&y)?;
        c.check("Jm(iii) disjoint stars", star(&xd).disjoint(&star(&yd))?);
        c.check("Jm(iii) additivity", star(&xd.add(&yd)?) == star(&xd).add(&star(&yd))?);
        c.check("Jm(iii) modulus", star(&x.abs()) == star(&x.pos_part()).add(&star(&x.neg_part()))?);
        c.check("Jm(iii) projections", star(&b.apply(&x)?) == b.apply(&star(&x))?);

        c.check("Jm(iv) cone", star(&xc.mul(&yc)?) == star(&xc).mul(&star(&yc))?);
        c.check("Jm(iv) finite", star(&xfin.mul(&yfin)?) == star(&xfin).mul(&star(&yfin))?);
        c.check("Jm(iv) band", band_of(&star(&xc).mul(&star(&yc))?) == band_of(&star(&xc).meet(&star(&yc))?));
        for pow in 1..=3 {
            c.check("Jm(v)", star(&xc.int_power(pow)?) == star(&xc).int_power(pow)?);
        }

        let above = xc.add(&bump)?;
        c.check("Jm(vi)", le(&p.apply(&star(&above))?, &p.apply(&star(&xc))?)?);
        c.check("Jm(vi) principal band", le(&band_of(&xc).apply(&star(&above))?, &star(&xc))?);

        c.check("s: weak units are invertible", w.mul(&star(&w))? == Element::unit(d));
        Ok(())
    })
}

/// `x_n = x ∧ n e` is constant on finite coordinates once `n >= 4` (grid
/// values are at most 3) and equals `n` on infinite ones.
const SETTLED: i64 = 4;

fn yy2_q_star(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let x = gen::cone(rng, d);
    run(json!({"x": x}), |c| {
        let limit = star(&x);
        for n in 1..SETTLED + 3 {
            let xn = x_and_n(&x, n);
            c.check("generator increases", le(&xn, &x_and_n(&x, n + 1))?);
            c.check("Jm(vi) along the generator", le(&band_of(&xn).apply(&limit)?, &star(&xn))?);
        }
        for n in SETTLED..SETTLED + 3 {
            let sn = star(&x_and_n(&x, n));
            for (i, xi) in x.coords().iter().enumerate() {
                let ok = match xi {
                    ExtValue::Finite(_) => sn.coords()[i] == limit.coords()[i],
                    ExtValue::Infinity => {
                        sn.coords()[i] == ExtValue::Finite(rat(1, n)) && limit.coords()[i].is_zero()
                    }
                };
                c.check("star converges in order", ok);
            }
        }
        Ok(())
    })
}

fn yy2_r(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let x = gen::cone(rng, d);
    let a = gen::cone(rng, d);
    run(json!({"x": x, "a": a}), |c| {
        let y = x.mul(&x)?.add(&a)?;
        let claimed = finite_part(&x).mul(&star(&y))?;
        let y_and = |n: i64| y.meet(&Element::constant(d, int(n * n)));
        for n in 1..SETTLED + 3 {
            let (xn, yn) = (x_and_n(&x, n), y_and(n)?);
            c.check("x_n^2 <= y_n", le(&xn.mul(&xn)?, &yn)?);
            c.check("x_n y_n* <= x_n*", le(&xn.mul(&star(&yn))?, &star(&xn))?);
        }
        for n in SETTLED..SETTLED + 3 {
            let zn = x_and_n(&x, n).mul(&star(&y_and(n)?))?;
            for (i, yi) in y.coords().iter().enumerate() {
                let ok = match yi {
                    ExtValue::Finite(_) => zn.coords()[i] == claimed.coords()[i],
                    ExtValue::Infinity => {
                        zn.coords()[i] <= ExtValue::Finite(rat(1, n)) && claimed.coords()[i].is_zero()
                    }
                };
                c.check("x_n y_n* converges to x^f y*", ok);
            }
        }
        Ok(())
    })
}

fn l1(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let x = gen::seq_with(rng, |r| gen::finite_cone(r, d));
    let u = gen::finite_cone(rng, d);
    run(json!({"x": x, "u": u}), |c| {
        let ux = scaled_seq(&u, &x)?;
        c.check("L1(i) inf", ux.inf() == u.mul(&x.inf())?);
        c.check("L1(i) sup", ux.sup() == u.mul(&x.sup())?);
        c.check("L1(ii) liminf", ux.liminf() == u.mul(&x.liminf())?);
        c.check("L1(ii) limsup", ux.limsup() == u.mul(&x.limsup())?);
        Ok(())
    })
}

fn yy2_t_products(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let x = gen::seq_with(rng, |r| gen::finite_cone(r, d));
    let y = gen::seq_with(rng, |r| gen::finite_cone(r, d));
    run(json!({"x": x, "y": y}), |c| {
        let p = prod_seq(&x, &y)?;
        let chain = [
            x.liminf().mul(&y.liminf())?,
            p.liminf(),
            x.liminf().mul(&y.limsup())?,
            p.limsup(),
            x.limsup().mul(&y.limsup())?,
        ];
        for w in chain.windows(2) {
            c.check("t: product chain", le(&w[0], &w[1])?);
        }
        Ok(())
    })
}

fn yy3_a(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let lim = gen::finite_cone(rng, d);
    let x = PeriodicSeq::new((0..rng.gen_range(0..=3)).map(|_| gen::finite_cone(rng, d)).collect(), vec![lim])
        .unwrap();
    let y = gen::seq_with(rng, |r| gen::finite_cone(r, d));
    run(json!({"x": x, "y": y}), |c| {
        let limit = x.order_limit().expect("eventually constant");
        let p = prod_seq(&x, &y)?;
        c.check("a: limsup", p.limsup() == limit.mul(&y.limsup())?);
        c.check("a: liminf", p.liminf() == limit.mul(&y.liminf())?);
        Ok(())
    })
}

fn yy2_p(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let (y, z, w) = (gen::cone(rng, d), gen::cone(rng, d), gen::cone(rng, d));
    run(json!({"y": y, "z": z, "w": w}), |c| {
        let yz = y.mul(&z)?;
        let x = w.meet(&yz)?;
        let (a, b) = mul_decompose(&x, &y, &z)?;
        c.check("P: product", a.mul(&b)? == x);
        c.check("P: a in [0, y]", a.is_cone() && le(&a, &y)?);
        c.check("P: b in [0, z]", b.is_cone() && le(&b, &z)?);
        let above = yz.add(&Element::unit(d))?;
        if !le(&above, &yz)? {
            c.check("P: rejects x above yz", mul_decompose(&above, &y, &z).is_err());
        }
        Ok(())
    })
}

fn yy2_g(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let x = gen::seq_with(rng, |r| gen::finite_cone(r, d));
    run(json!({"x": x}), |c| {
        let horizon = x.prefix_len() + x.cycle_len();
        let tails = (0..=horizon).map(|n| x.series_sum(n)).collect::<Result<Vec<_>>>()?;
        let r1 = infinite_part(&tails[0]);
        c.check("g: R_1 vs inf R_n", r1 == infinite_part(&Element::inf(&tails)?));
        for t in &tails {
            c.check("g: infinite part independent of n", infinite_part(t) == r1);
        }
        Ok(())
    })
}

fn yy2_b(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let k = rng.gen_range(1..=4);
    let family: Vec<BandProjection> = (0..k).map(|_| gen::band(rng, d)).collect();
    let bands = gen::seq_with(rng, |r| gen::band(r, d));
    let (x, y, a) = (gen::cone(rng, d), gen::cone(rng, d), gen::cone(rng, d));
    run(json!({"family": family, "bands": bands, "x": x, "y": y, "a": a}), |c| {
        let phi: Vec<Element> = family.iter().map(infinity_of).collect();
        c.check("B(i) inf", Element::inf(&phi)? == infinity_of(&BandProjection::inf(&family)?));
        c.check("B(i) sup", Element::sup(&phi)? == infinity_of(&BandProjection::sup(&family)?));
        let phis = bands.map(infinity_of);
        c.check("B(ii) limsup", phis.limsup() == infinity_of(&bands.limsup()));
        c.check("B(ii) liminf", phis.liminf() == infinity_of(&bands.liminf()));
        for (i, p) in family.iter().enumerate() {
            for q in &family[i..] {
                c.check("B(iii) injective", (p == q) == (infinity_of(p) == infinity_of(q)));
                c.check("B(iii) meets", infinity_of(&p.meet(q)?) == infinity_of(p).meet(&infinity_of(q))?);
                c.check("B(iii) joins", infinity_of(&p.join(q)?) == infinity_of(p).join(&infinity_of(q))?);
            }
        }
        c.check("B(iii) bottom", infinity_of(&BandProjection::empty(d)).is_zero());
        c.check("B(iii) top", infinity_of(&BandProjection::full(d)) == Element::infinity(d));

        let bx = band_of(&x);
        c.check("l(i) product band", band_of(&x.mul(&y)?) == bx.meet(&band_of(&y))?);
        c.check("l(i) meet band", band_of(&x.abs().meet(&y.abs())?) == bx.meet(&band_of(&y))?);
        let b = &family[0];
        c.check("l(ii)", infinity_of(b).mul(&x)? == infinity_of(&b.meet(&bx)?));

        c.check("pi is the band projection", pi(&x, &a)? == bx.apply(&a)?);
        let comp = pi(&x, &Element::unit(d))?;
        c.check("pi(e) is a component", comp.meet(&Element::unit(d).sub(&comp)?)?.is_zero());
        c.check("pi(e) generates the band", band_of(&comp) == bx && comp == component(&x));
        Ok(())
    })
}

struct GramCase {
    t: CondExp,
    qs: Vec<BandProjection>,
    us: Vec<Element>,
}

impl GramCase {
    fn draw(rng: &mut Rng, max_n: usize) -> Self {
        let d = gen::dim(rng);
        let t = gen::cond_exp(rng, d);
        let n = rng.gen_range(1..=max_n);
        let qs = (0..n).map(|_| gen::band(rng, d)).collect();
        let us = (0..n).map(|_| gen::range_weight(rng, &t)).collect();
        GramCase { t, qs, us }
    }

    /// `(u_i u_j T Q_i Q_j e)`.
    fn matrix(&self) -> Result<XMatrix> {
        let g = gram_matrix(&self.t, &self.qs)?;
        let n = self.qs.len();
        XMatrix::from_fn(n, n, |i, j| self.us[i].mul(&self.us[j])?.mul(g.get(i, j)))
    }

    fn instance(&self) -> Value {
        json!({"cond": self.t.to_doc(), "events": self.qs, "weights": self.us})
    }
}

fn m1(rng: &mut Rng) -> Trial {
    let case = GramCase::draw(rng, 4);
    let d = case.t.dim();
    let xs: Vec<Element> = case.qs.iter().map(|_| gen::finite(rng, d)).collect();
    let mut inst = case.instance();
    inst["tuple"] = json!(xs);
    run(inst, |c| {
        let m = case.matrix()?;
        c.check("M1: weighted gram is PSD", m.is_psd());
        for w in 0..d {
            c.check("M1: atom evaluations are PSD", real_is_psd(&m.at_atom(w)?));
        }
        c.check("PSD definition on a tuple", m.quadratic_form(&xs)?.is_cone());
        Ok(())
    })
}

fn composition(rng: &mut Rng, n: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.gen_range(1..=left);
        sizes.push(s);
        left -= s;
    }
    sizes
}

fn m2(rng: &mut Rng) -> Trial {
    let case = GramCase::draw(rng, 5);
    let sizes = composition(rng, case.qs.len());
    let mut inst = case.instance();
    inst["block_sizes"] = json!(sizes);
    run(inst, |c| {
        let m = case.matrix()?;
        let s = m.compress(&sizes)?;
        c.check("M2(1): compression is PSD", s.is_psd());
        c.check("M2(2): determinant is nonnegative", m.det()?.is_cone());
        c.check("M2(2): compressed determinant", s.det()?.is_cone());
        Ok(())
    })
}

fn m3(rng: &mut Rng) -> Trial {
    let mut case = GramCase::draw(rng, 5);
    if case.qs.len() == 1 {
        let d = case.t.dim();
        case.qs.push(gen::band(rng, d));
        case.us.push(gen::range_weight(rng, &case.t));
    }
    let split = rng.gen_range(1..case.qs.len());
    let mut inst = case.instance();
    inst["split"] = json!(split);
    run(inst, |c| {
        let m = case.matrix()?;
        c.check("M3", m.block_gamma_check(split)?);
        Ok(())
    })
}

fn m4(rng: &mut Rng) -> Trial {
    let case = GramCase::draw(rng, 4);
    let d = case.t.dim();
    let x = gen::finite(rng, d);
    let blocky = gen::block_constant(rng, &case.t, |r| {
        if r.gen_bool(gen::INF_PROB) {
            ExtValue::Infinity
        } else {
            ExtValue::Finite(gen::nonneg(r))
        }
    });
    let mut inst = case.instance();
    inst["x"] = json!(x);
    inst["block_constant"] = json!(blocky);
    run(inst, |c| {
        let t = &case.t;
        let g = gram_matrix(t, &case.qs)?;
        c.check("M4: gram is PSD", g.is_psd());
        c.check("M4: gram entries", (0..case.qs.len()).all(|i| g.get(i, i) == &t.apply(&case.qs[i].unit()).unwrap()));

        let n = case.qs.len();
        let seq = WeightedEventSeq::new(
            t.clone(),
            PeriodicSeq::new(case.us.clone(), vec![Element::zero(d)])?,
            PeriodicSeq::new(case.qs.clone(), vec![BandProjection::empty(d)])?,
        )?;
        let s = seq.s(1, Upto::At(n))?;
        c.check("M4: Γ of the weighted gram is S", case.matrix()?.gamma() == s);
        let k = seq.k(1, Upto::At(n))?;
        c.check("M4: K^2 <= S", le(&k.mul(&k)?, &s)?);

        let tx = t.apply(&x)?;
        c.check("T is idempotent", t.apply(&tx)? == tx);
        c.check("T e = e", t.apply(&Element::unit(d))? == Element::unit(d));
        let u = &case.us[0];
        c.check("averaging property", t.apply(&u.mul(&x)?)? == u.mul(&tx)?);
        let pos = x.pos_part();
        c.check("T is positive", t.apply(&pos)?.is_cone());
        c.check("T is strictly positive", pos.is_zero() || !t.apply(&pos)?.is_zero());
        for q in &case.qs {
            let commutes = (0..d).all(|a| {
                let ea = BandProjection::new(d, [a]).unwrap().unit();
                t.apply(&q.apply(&ea).unwrap()).unwrap() == q.apply(&t.apply(&ea).unwrap()).unwrap()
            });
            c.check("T commutes with P exactly for unions of blocks", commutes == t.commutes_with(q));
        }

        c.check("i: finite part stays in the range", t.is_block_constant(&finite_part(&blocky)));
        c.check("i: infinite part stays in the range", t.is_block_constant(&infinite_part(&blocky)));
        Ok(())
    })
}

/// `S_{q,n}` and `K_{q,n}` by direct summation over indices.
fn direct_ks(seq: &WeightedEventSeq, q: usize, n: usize) -> Result<(Element, Element)> {
    let t = seq.cond();
    let d = seq.dim();
    let mut k = Element::zero(d);
    let mut s = Element::zero(d);
    for i in q..=n {
        k = k.add(&seq.weight(i).mul(&t.apply(&seq.event(i).unit())?)?)?;
        for j in q..=n {
            let tq = t.apply(&seq.event(i).meet(seq.event(j))?.unit())?;
            s = s.add(&seq.weight(i).mul(seq.weight(j))?.mul(&tq)?)?;
        }
    }
    Ok((k, s))
}

fn m5(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let t = gen::cond_exp(rng, d);
    let seq = gen::weighted_event_seq(rng, t);
    let q = rng.gen_range(1..=6);
    let p = rng.gen_range(1..=q);
    let n = q + rng.gen_range(0..=8);
    let mut inst = seq_instance(&seq);
    inst["p"] = json!(p);
    inst["q"] = json!(q);
    inst["n"] = json!(n);
    run(inst, |c| {
        let (k, s) = (seq.k(q, Upto::At(n))?, seq.s(q, Upto::At(n))?);
        c.check("K and S match direct summation", direct_ks(&seq, q, n)? == (k.clone(), s.clone()));
        c.check("M5(i) finite", le(&k.mul(&k)?, &s)?);
        let (ki, si) = (seq.k(q, Upto::Infinity)?, seq.s(q, Upto::Infinity)?);
        c.check("M5(i) infinite", le(&ki.mul(&ki)?, &si)?);
        if p < q {
            let mut rhs = seq.s(p, Upto::At(q - 1))?.add(&s)?;
            for j in p..q {
                rhs = rhs.add(&seq.r_j(q, Upto::At(n), j)?.scale(&int(2))?)?;
            }
            c.check("S decomposition", seq.s(p, Upto::At(n))? == rhs);
        }
        let n_max = q + seq.prefix_len() + 4 * seq.cycle_len();
        let report = m5_limit_check(&seq, q, p, n_max)?;
        c.check("M5(ii) limit", report.agrees);
        if finite_part(&si).is_zero() {
            c.check("M5(ii) special case", report.claimed == component(&si));
        }
        Ok(())
    })
}

fn m6(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let t = gen::cond_exp(rng, d);
    let seq = gen::weighted_event_seq(rng, t);
    run(seq_instance(&seq), |c| {
        let inf = |q| -> Result<(Element, Element, Element)> {
            Ok((seq.r(q, Upto::Infinity)?, seq.k(q, Upto::Infinity)?, seq.s(q, Upto::Infinity)?))
        };
        let (r1, k1, s1) = inf(1)?;
        c.check("M6(i) R <= K", le(&infinite_part(&r1), &infinite_part(&k1))?);
        c.check("M6(i) K <= S", le(&infinite_part(&k1), &infinite_part(&s1))?);
        let p = seq.divergence_band();
        let limit = seq.ratio_limsup(1, &p)?;
        let (mut kf, mut rf) = (finite_part(&k1), finite_part(&r1));
        for q in 2..=5 {
            let (rq, kq, _) = inf(q)?;
            c.check("M6(ii) K^f decreasing", le(&finite_part(&kq), &kf)?);
            c.check("M6(ii) R^f decreasing", le(&finite_part(&rq), &rf)?);
            c.check("M6(iii) K^inf", infinite_part(&kq) == infinite_part(&k1));
            c.check("M6(iii) R^inf", infinite_part(&rq) == infinite_part(&r1));
            c.check("M6(v) limsup independent of q", seq.ratio_limsup(q, &p)? == limit);
            kf = finite_part(&kq);
            rf = finite_part(&rq);
        }
        Ok(())
    })
}

fn m7_cert(rng: &mut Rng) -> Trial {
    let d = gen::dim(rng);
    let t = gen::cond_exp(rng, d);
    let seq = gen::weighted_event_seq(rng, t.clone());
    let ns = gen::checkpoints(rng, 12);
    let events = gen::seq_with(rng, |r| gen::band(r, d));
    let mut inst = json!(BoundDoc::from_seq(&seq, ns.clone()));
    inst["corollary_events"] = json!(events);
    run(inst, |c| {
        let report = theorem_m7(&seq, &ns)?;
        c.check("M7: certificates", report.certificates.iter().all(|x| x.holds));
        c.check("M7: lhs dominates the limsup", le(&report.rhs_limsup, &report.lhs)?);
        c.check("M7: lhs is in the range of T", t.is_block_constant(&report.lhs));
        if let Some(u) = &report.unprojected {
            c.check("M7: unprojected form", u.holds);
        }
        c.check("M7: verdict", report.verdict);
        let cor = corollary_m10(&t, &events, &ns)?;
        c.check("M10: displayed form", cor.displayed_matches);
        c.check("M10: verdict", cor.bound.verdict);
        Ok(())
    })
}

const PROBS: [(i64, i64); 5] = [(1, 4), (1, 3), (1, 2), (2, 3), (3, 4)];

fn bc(rng: &mut Rng) -> Trial {
    let draw = |r: &mut Rng| {
        let (n, d) = PROBS[r.gen_range(0..PROBS.len())];
        rat(n, d)
    };
    let len = rng.gen_range(1..=3);
    let ps: Vec<Rational> = (0..len).map(|_| draw(rng)).collect();
    let depth = rng.gen_range(1..=5);
    let constant = draw(rng);
    let inst = json!({
        "p": ps.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "depth": depth,
        "constant_p": constant.to_string(),
    });
    run(inst, |c| {
        let r = crate::fls::borel_cantelli(&ps, depth)?;
        c.check("BC: pairwise independent", r.pairwise_independent);
        c.check("BC: certificate", r.certificate_holds);
        c.check("BC: S <= K^2 + K", r.independence_bound_holds);
        c.check("BC: K^2 <= S", r.k_squared_below_s);
        let p_at = |n: usize| &ps[n % ps.len()];
        let miss: Rational = (0..depth).map(|n| Rational::one() - p_at(n)).product();
        c.check("BC: union value", r.union_value == Rational::one() - miss);
        let k: Rational = (0..depth).map(p_at).sum();
        let var: Rational = (0..depth).map(|n| p_at(n) * (Rational::one() - p_at(n))).sum();
        c.check("BC: ratio closed form", r.fls_ratio == &k * &k / (&k * &k + var));
        c.check("BC: K", r.k == k);
        let (_, monotone) = crate::fls::borel_cantelli_sweep(std::slice::from_ref(&constant), depth)?;
        c.check("BC: ratio nondecreasing for constant p", monotone);
        c.check("BC: gap", r.gap + &r.union_value == Rational::one() && !r.union_value.is_zero());
        Ok(())
    })
}
