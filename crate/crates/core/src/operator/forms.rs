//! Quadratic forms, the regularized H¹-type form, the Wronskian bracket and the
//! finite-radius Green identity.

use std::f64::consts::{PI, TAU};

use super::conormal::{apply_L, ConormalElement};
use super::field::{sample_all, sample_all_plain, sample_field, sample_plain, FieldSample, ModeField};
use crate::basis::{PhiGamma, RadialRule, Regime, RuleSpec};
use crate::{Complex64, Error, Result};

/// Value of the regularized form together with the cut radius used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormValue {
    pub value: Complex64,
    pub b_used: f64,
}

/// Rule on [x_lo, x_hi] split at the breakpoints of both fields.
pub fn split_rule(x_lo: f64, x_hi: f64, f: &dyn ModeField, g: &dyn ModeField, spec: &RuleSpec) -> Result<RadialRule> {
    let mut cuts: Vec<f64> = f
        .breakpoints()
        .into_iter()
        .chain(g.breakpoints())
        .filter(|&c| c > x_lo && c < x_hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = vec![x_lo];
    edges.extend(cuts);
    edges.push(x_hi);
    let mut rule = RadialRule { x: Vec::new(), rho: Vec::new(), w: Vec::new() };
    for pair in edges.windows(2) {
        let piece = RadialRule::on_x(pair[0], pair[1], spec)?;
        rule.x.extend(piece.x);
        rule.rho.extend(piece.rho);
        rule.w.extend(piece.w);
    }
    Ok(rule)
}

fn check_pair(f: &dyn ModeField, g: &dyn ModeField) -> Result<()> {
    if f.gamma() != g.gamma() {
        return Err(Error::Domain(format!("γ differs: {} vs {}", f.gamma(), g.gamma())));
    }
    Ok(())
}

/// ⟨f, g⟩ in L²(D, x^γ dV) on a precomputed rule; zero across modes.
pub fn l2_pair_on(rule: &RadialRule, f: &dyn ModeField, g: &dyn ModeField) -> Complex64 {
    if f.mode() != g.mode() {
        return Complex64::new(0.0, 0.0);
    }
    let a: Vec<_> = sample_all_plain(f, &rule.x, &rule.rho).iter().map(|s| s.value).collect();
    let b: Vec<_> = sample_all_plain(g, &rule.x, &rule.rho).iter().map(|s| s.value).collect();
    rule.pair(f.gamma(), &a, &b) * TAU
}

/// ⟨f, g⟩ in L²(D, x^γ dV).
pub fn l2_pair(f: &dyn ModeField, g: &dyn ModeField, spec: &RuleSpec) -> Result<Complex64> {
    check_pair(f, g)?;
    Ok(l2_pair_on(&split_rule(0.0, 1.0, f, g, spec)?, f, g))
}

/// α_γ(f, g) = ⟨√x ∂_ρ f, √x ∂_ρ g⟩ + ⟨ρ⁻¹∂_ω f, ρ⁻¹∂_ω g⟩ + (1+γ)²⟨f, g⟩ in L²_γ.
///
/// Finite on singular elements only for γ < 0.
pub fn alpha_form(gamma: f64, f: &ConormalElement, g: &ConormalElement, spec: &RuleSpec) -> Result<Complex64> {
    if f.gamma() != gamma || g.gamma() != gamma {
        return Err(Error::Domain("element γ differs from form γ".into()));
    }
    if gamma >= 0.0 && (!f.singular().is_zero() || !g.singular().is_zero()) {
        return Err(Error::InfiniteForm(format!(
            "α_γ diverges on weighted elements for γ = {gamma} ≥ 0"
        )));
    }
    if f.m() != g.m() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let rule = RadialRule::new(spec)?;
    let fs = sample_all_plain(f, &rule.x, &rule.rho);
    let gs = sample_all_plain(g, &rule.x, &rule.rho);
    Ok(interior_terms(&rule, gamma, f.m(), &fs, &gs, None))
}

/// 2π[∫(x∂f)(x∂ḡ)x^{γ−1} + m²∫fḡρ⁻²x^γ + (γ+1)²∫fḡx^γ] over a rule; the
/// derivative term can be switched off by passing a rule for it separately.
fn interior_terms(
    rule: &RadialRule,
    gamma: f64,
    m: i64,
    fs: &[FieldSample],
    gs: &[FieldSample],
    grad_rule: Option<(&RadialRule, &[FieldSample], &[FieldSample])>,
) -> Complex64 {
    let grad = match grad_rule {
        None => {
            let a: Vec<_> = fs.iter().map(|s| s.x_d_rho).collect();
            let b: Vec<_> = gs.iter().map(|s| s.x_d_rho).collect();
            rule.pair(gamma - 1.0, &a, &b)
        }
        Some((r, f2, g2)) => {
            let a: Vec<_> = f2.iter().map(|s| s.x_d_rho).collect();
            let b: Vec<_> = g2.iter().map(|s| s.x_d_rho).collect();
            r.pair(gamma - 1.0, &a, &b)
        }
    };
    let mf = (m * m) as f64;
    let a: Vec<_> = fs.iter().map(|s| s.value).collect();
    let b: Vec<_> = gs.iter().map(|s| s.value).collect();
    let angular = if m == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        let ar: Vec<_> = a.iter().zip(&rule.rho).map(|(v, r)| v / r).collect();
        let br: Vec<_> = b.iter().zip(&rule.rho).map(|(v, r)| v / r).collect();
        rule.pair(gamma, &ar, &br) * mf
    };
    let mass = rule.pair(gamma, &a, &b) * (gamma + 1.0).powi(2);
    (grad + angular + mass) * TAU
}

/// The regularized form (f, g)_{H̃^{1,γ}} with cut radius b ∈ (b_γ, 1).
///
/// Quasi-derivative term on the annulus b < ρ < 1, circle term at ρ = b, plain
/// gradient on the disk ρ < b, angular and mass terms on the whole disk. At γ = 0
/// the annulus integrand decays only like 1/(x log²x); the mass below the rule
/// floor is added in closed form.
pub fn h1_form(
    phi: &PhiGamma,
    b: Option<f64>,
    f: &dyn ModeField,
    g: &dyn ModeField,
    spec: &RuleSpec,
) -> Result<FormValue> {
    check_pair(f, g)?;
    let gamma = phi.gamma();
    if f.gamma() != gamma {
        return Err(Error::Domain("φ_γ and elements carry different γ".into()));
    }
    let b = b.unwrap_or_else(|| phi.default_b());
    if !(b > phi.b_gamma() && b < 1.0) {
        return Err(Error::Domain(format!(
            "cut radius {b} outside ({}, 1)",
            phi.b_gamma()
        )));
    }
    if f.mode() != g.mode() {
        return Ok(FormValue { value: Complex64::new(0.0, 0.0), b_used: b });
    }
    let x_b = (1.0 - b) * (1.0 + b);
    let whole = split_rule(0.0, 1.0, f, g, spec)?;
    let annulus = split_rule(0.0, x_b, f, g, spec)?;
    let disk = split_rule(x_b, 1.0, f, g, spec)?;

    let fa = sample_all(f, phi, &annulus.x, &annulus.rho);
    let ga = sample_all(g, phi, &annulus.x, &annulus.rho);
    let a: Vec<_> = fa.iter().map(|s| s.x_n_phi).collect();
    let bb: Vec<_> = ga.iter().map(|s| s.x_n_phi).collect();
    let mut quasi = annulus.pair(gamma - 1.0, &a, &bb) * TAU;
    if phi.param().regime() == Regime::LogCritical {
        let cf = f.neumann_trace(phi.c0());
        let cg = g.neumann_trace(phi.c0());
        quasi += cf * cg.conj() * (PI / (phi.c0() - spec.x_floor.ln()));
    }

    let ps = phi.sample(x_b, b);
    let fb = sample_field(f, phi, x_b, b).value;
    let gb = sample_field(g, phi, x_b, b).value;
    let circle = -fb * gb.conj() * (TAU * b * x_b.powf(gamma + 1.0) * ps.d_rho / ps.value);

    let fw = sample_all(f, phi, &whole.x, &whole.rho);
    let gw = sample_all(g, phi, &whole.x, &whole.rho);
    let fd = sample_all(f, phi, &disk.x, &disk.rho);
    let gd = sample_all(g, phi, &disk.x, &disk.rho);
    let rest = interior_terms(&whole, gamma, f.mode(), &fw, &gw, Some((&disk, &fd, &gd)));
    Ok(FormValue { value: quasi + circle + rest, b_used: b })
}

/// W(f, g)(ρ) = ρ x^{γ+1}(f ∂_ρ g − g ∂_ρ f), assembled part by part so that the
/// leading singular products cancel analytically rather than numerically.
pub fn wronskian_bracket(f: &dyn ModeField, g: &dyn ModeField, rho: f64) -> Result<Complex64> {
    check_pair(f, g)?;
    if f.mode() != g.mode() {
        return Err(Error::ModeMismatch(f.mode(), g.mode()));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Domain(format!("radius {rho} outside (0, 1)")));
    }
    let gamma = f.gamma();
    let x = (1.0 - rho) * (1.0 + rho);
    let p = f.parts(x, rho);
    let q = g.parts(x, rho);
    let base = rho * x.powf(gamma + 1.0);
    // ρx^{γ+1}w, ρx^{γ+1}w², ρx^{γ+1}∂_ρw
    let (bw, bww, bdw) = if gamma == 0.0 {
        let l = x.ln();
        (rho * x * l, rho * x * l * l, -2.0 * rho * rho)
    } else {
        (rho * x, rho * x.powf(1.0 - gamma), 2.0 * gamma * rho * rho)
    };
    let rr = (p.regular * q.regular_d - q.regular * p.regular_d) * base;
    let rw = (p.regular * q.weighted_d - q.weighted * p.regular_d) * bw + p.regular * q.weighted * bdw;
    let wr = (p.weighted * q.regular_d - q.regular * p.weighted_d) * bw - p.weighted * q.regular * bdw;
    let ww = (p.weighted * q.weighted_d - q.weighted * p.weighted_d) * bww;
    Ok(rr + rw + wr + ww)
}

/// |LHS − RHS| of the first Green identity on the disk of radius R:
/// ∫_{D_R} L f ḡ x^γ dV = ∫_{D_R}(x^{γ+1}∂f∂ḡ + m²ρ⁻²x^γfḡ + (1+γ)²x^γfḡ)dV
///   − 2πR x_R^{γ+1} ∂_ρf(R) ḡ(R).
pub fn green_residual_pre_r(
    gamma: f64,
    f: &ConormalElement,
    g: &ConormalElement,
    radius: f64,
    spec: &RuleSpec,
) -> Result<f64> {
    let (lhs, rhs) = pre_green_sides(gamma, f, g, radius, spec)?;
    Ok((lhs - rhs).norm())
}

/// |LHS − RHS| of the second (skew) Green identity on D_R.
pub fn green_residual_pre_r_skew(
    gamma: f64,
    f: &ConormalElement,
    g: &ConormalElement,
    radius: f64,
    spec: &RuleSpec,
) -> Result<f64> {
    let (l1, r1) = pre_green_sides(gamma, f, g, radius, spec)?;
    let (l2, r2) = pre_green_sides(gamma, g, f, radius, spec)?;
    Ok(((l1 - l2.conj()) - (r1 - r2.conj())).norm())
}

fn pre_green_sides(
    gamma: f64,
    f: &ConormalElement,
    g: &ConormalElement,
    radius: f64,
    spec: &RuleSpec,
) -> Result<(Complex64, Complex64)> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Domain(format!("radius {radius} outside (0, 1)")));
    }
    if f.gamma() != gamma || g.gamma() != gamma {
        return Err(Error::Domain("element γ differs from identity γ".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    if f.m() != g.m() {
        return Ok((zero, zero));
    }
    let x_r = (1.0 - radius) * (1.0 + radius);
    let rule = RadialRule::on_x(x_r, 1.0, spec)?;
    let lf = apply_L(gamma, f)?;
    let fs = sample_all_plain(f, &rule.x, &rule.rho);
    let gs = sample_all_plain(g, &rule.x, &rule.rho);
    let ls = sample_all_plain(&lf, &rule.x, &rule.rho);
    let a: Vec<_> = ls.iter().map(|s| s.value).collect();
    let b: Vec<_> = gs.iter().map(|s| s.value).collect();
    let lhs = rule.pair(gamma, &a, &b) * TAU;
    let body = interior_terms(&rule, gamma, f.m(), &fs, &gs, None);
    let fr = sample_plain(f, x_r, radius);
    let gr = sample_plain(g, x_r, radius);
    let circle = fr.x_d_rho * gr.value.conj() * (TAU * radius * x_r.powf(gamma));
    Ok((lhs, body - circle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{apply_L, ConormalElement};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec() -> RuleSpec {
        RuleSpec::default()
    }

    #[test]
    fn alpha_on_low_monomials() {
        let one = ConormalElement::from_real(0.0, 0, &[1.0], &[]).unwrap();
        let v = alpha_form(0.0, &one, &one, &spec()).unwrap();
        assert!((v.re - PI).abs() < 1e-12 && v.im.abs() < 1e-14);
        let rho = ConormalElement::from_real(0.0, 1, &[1.0], &[]).unwrap();
        let v = alpha_form(0.0, &rho, &rho, &spec()).unwrap();
        assert!((v.re - TAU).abs() < 1e-12);
        // π(1+γ) for the constant at general γ
        let one = ConormalElement::from_real(-0.4, 0, &[1.0], &[]).unwrap();
        let v = alpha_form(-0.4, &one, &one, &spec()).unwrap();
        assert!((v.re - 0.6 * PI).abs() < 1e-12);
    }

    #[test]
    fn alpha_refuses_weighted_parts_for_nonnegative_gamma() {
        let f = ConormalElement::from_real(0.5, 0, &[], &[1.0]).unwrap();
        assert!(matches!(alpha_form(0.5, &f, &f, &spec()), Err(Error::InfiniteForm(_))));
        let f = ConormalElement::from_real(0.0, 0, &[], &[1.0]).unwrap();
        assert!(matches!(alpha_form(0.0, &f, &f, &spec()), Err(Error::InfiniteForm(_))));
        let f = ConormalElement::from_real(-0.5, 0, &[], &[1.0]).unwrap();
        assert!(alpha_form(-0.5, &f, &f, &spec()).is_ok());
    }

    #[test]
    fn l2_pair_vanishes_across_modes() {
        let f = ConormalElement::from_real(0.2, 1, &[1.0], &[]).unwrap();
        let g = ConormalElement::from_real(0.2, 3, &[1.0], &[]).unwrap();
        assert_eq!(l2_pair(&f, &g, &spec()).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn h1_form_does_not_depend_on_the_cut() {
        for (g, c0) in [(0.5, 4.0), (0.0, 4.0), (0.0, 6.0), (0.85, 4.0)] {
            let phi = PhiGamma::new(g, c0).unwrap();
            let f = ConormalElement::from_real(g, 0, &[0.3], &[1.0, 0.5]).unwrap();
            let bg = phi.b_gamma();
            let vals: Vec<_> = [0.25, 0.5, 0.9]
                .iter()
                .map(|t| h1_form(&phi, Some(bg + t * (1.0 - bg)), &f, &f, &spec()).unwrap().value)
                .collect();
            for v in &vals[1..] {
                assert!((v - vals[0]).norm() < 1e-9 * vals[0].norm().max(1.0), "γ={g}: {vals:?}");
            }
        }
    }

    #[test]
    fn h1_form_rejects_bad_cut() {
        let phi = PhiGamma::new(0.5, 4.0).unwrap();
        let f = ConormalElement::from_real(0.5, 0, &[1.0], &[]).unwrap();
        assert!(h1_form(&phi, Some(phi.b_gamma() * 0.5), &f, &f, &spec()).is_err());
        assert!(h1_form(&phi, Some(1.0), &f, &f, &spec()).is_err());
    }

    #[test]
    fn first_and_second_green_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for g in [-0.6, -0.25, 0.0, 0.3, 0.7] {
            let phi = PhiGamma::new(g, crate::DEFAULT_C0).unwrap();
            for m in [0, 2] {
                let f = ConormalElement::random(&mut rng, g, m, 3, true).unwrap();
                let h = ConormalElement::random(&mut rng, g, m, 3, true).unwrap();
                let lf = apply_L(g, &f).unwrap();
                let lh = apply_L(g, &h).unwrap();
                let lfh = l2_pair(&lf, &h, &spec()).unwrap();
                let flh = l2_pair(&f, &lh, &spec()).unwrap();
                let form = h1_form(&phi, None, &f, &h, &spec()).unwrap().value;
                let c0 = phi.c0();
                let bnd = f.neumann_trace(c0) * h.dirichlet_trace().conj() * TAU;
                let scale = lfh.norm().max(1.0);
                assert!((lfh - form - bnd).norm() < 1e-9 * scale, "G1 γ={g} m={m}: {lfh} vs {}", form + bnd);
                let skew = (f.neumann_trace(c0) * h.dirichlet_trace().conj()
                    - f.dirichlet_trace() * h.neumann_trace(c0).conj())
                    * TAU;
                assert!((lfh - flh - skew).norm() < 1e-9 * scale, "G2 γ={g} m={m}");
            }
        }
    }

    #[test]
    fn wronskian_limits() {
        let g = 0.4;
        let one = ConormalElement::from_real(g, 0, &[1.0], &[]).unwrap();
        let w = ConormalElement::from_real(g, 0, &[], &[1.0]).unwrap();
        let v = wronskian_bracket(&one, &w, 1.0 - 1e-12).unwrap();
        assert!((v.re - 2.0 * g).abs() < 1e-10);
        let g = -0.5;
        let f = ConormalElement::from_real(g, 0, &[], &[1.0]).unwrap();
        let one = ConormalElement::from_real(g, 0, &[1.0], &[]).unwrap();
        let v = wronskian_bracket(&f, &one, 1.0 - 1e-12).unwrap();
        assert!((v.re - 1.0).abs() < 1e-10);
        let a = ConormalElement::from_real(g, 1, &[1.0], &[]).unwrap();
        assert!(matches!(wronskian_bracket(&a, &one, 0.5), Err(Error::ModeMismatch(1, 0))));
    }

    #[test]
    fn wronskian_matches_differences_at_log_critical() {
        let f = ConormalElement::from_real(0.0, 1, &[0.5, 1.0], &[1.0, -0.2]).unwrap();
        let h = ConormalElement::from_real(0.0, 1, &[1.0], &[0.3]).unwrap();
        let r = 0.6;
        let e = 1e-5;
        let d = |u: &ConormalElement| (u.eval(r + e) - u.eval(r - e)) / (2.0 * e);
        let want = (f.eval(r) * d(&h) - h.eval(r) * d(&f)) * (r * (1.0 - r * r));
        let got = wronskian_bracket(&f, &h, r).unwrap();
        assert!((got - want).norm() < 1e-8);
    }

    #[test]
    fn pre_green_on_quadratic() {
        let f = ConormalElement::from_real(0.0, 0, &[0.0, 1.0], &[]).unwrap();
        assert!(green_residual_pre_r(0.0, &f, &f, 0.9, &spec()).unwrap() < 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for g in [-0.5, 0.0, 0.5] {
            let f = ConormalElement::random(&mut rng, g, 1, 4, true).unwrap();
            let h = ConormalElement::random(&mut rng, g, 1, 4, true).unwrap();
            assert!(green_residual_pre_r(g, &f, &h, 0.95, &spec()).unwrap() < 1e-8);
            assert!(green_residual_pre_r_skew(g, &f, &h, 0.95, &spec()).unwrap() < 1e-8);
        }
    }
}
