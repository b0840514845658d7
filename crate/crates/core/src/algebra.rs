//! Truncated Fock-space representations of the algebra generators and the
//! canonical pair, plus numerical verification of the algebra relations.

use std::fmt;

use num_complex::Complex;

use crate::error::{GhaError, Result};
use crate::matrix::{commutator, Matrix};
use crate::scalar::Real;
use crate::spectrum::{SpectrumModel, SystemId};

/// Matrices of `J0, A, A^dag, N, D, D^dag, xi, rho` on the first `dim`
/// Fock states.
#[derive(Debug, Clone)]
pub struct AlgebraRep<T> {
    system: SystemId,
    dim: usize,
    nilpotent: bool,
    j0: Matrix<T>,
    a: Matrix<T>,
    a_dag: Matrix<T>,
    number: Matrix<T>,
    d: Matrix<T>,
    d_dag: Matrix<T>,
    xi: Matrix<T>,
    rho: Matrix<T>,
    length: T,
    hbar: T,
    d_reconstruction: T,
}

fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Tolerance of the construction self-check: 1e-12 for `f64`.
fn construction_tol<T: Real>() -> T {
    T::lit(1e-12).max(T::lit(64.0) * T::epsilon())
}

/// Builds the representation with `L = hbar = 1`.
pub fn build_rep<T: Real>(spec: &SpectrumModel<T>, dim: usize) -> Result<AlgebraRep<T>> {
    build_rep_scaled(spec, dim, T::one(), T::one())
}

pub fn build_rep_scaled<T: Real>(
    spec: &SpectrumModel<T>,
    dim: usize,
    length: T,
    hbar: T,
) -> Result<AlgebraRep<T>> {
    if dim < 2 {
        return Err(GhaError::DimensionMismatch(format!(
            "representation dimension must be at least 2, got {dim}"
        )));
    }
    if !(length > T::zero() && hbar > T::zero()) {
        return Err(GhaError::InvalidParameter("L and hbar must be positive".into()));
    }
    if let Some(n_max) = spec.max_level() {
        if dim != n_max + 1 {
            return Err(GhaError::DimensionMismatch(format!(
                "nilpotent spectrum with n_max = {n_max} needs dim = {}, got {dim}",
                n_max + 1
            )));
        }
    }
    if let Some(top) = spec.highest_level().filter(|_| spec.max_level().is_none()) {
        // f(J0) needs the successor of the last stored level.
        if dim > top {
            return Err(GhaError::DimensionMismatch(format!(
                "energy table with {} levels supports dim <= {top}",
                top + 1
            )));
        }
    }

    let energies = (0..dim).map(|n| spec.energy(n)).collect::<Result<Vec<_>>>()?;
    let ladder = (0..dim - 1)
        .map(|n| spec.ladder_coefficient(n))
        .collect::<Result<Vec<_>>>()?;

    let j0 = Matrix::from_real_diagonal(&energies);
    let mut a_dag = Matrix::zeros(dim, dim);
    for (n, &c) in ladder.iter().enumerate() {
        a_dag[(n + 1, n)] = re(c);
    }
    let a = a_dag.adjoint();
    let number = Matrix::from_real_diagonal(&(0..dim).map(T::of).collect::<Vec<_>>());

    let mut d = Matrix::zeros(dim, dim);
    for n in 1..dim {
        d[(n - 1, n)] = re(T::of(n).sqrt());
    }
    let d_dag = d.adjoint();

    // D = sqrt(N + 1) (f(H) - e0)^(-1/2) A; the last row of A is empty, so
    // the inverse is only needed on levels 0..dim-2.
    let mut inv_gap = vec![T::zero(); dim];
    for (n, &c) in ladder.iter().enumerate() {
        if c == T::zero() {
            return Err(GhaError::DegenerateSpectrum { level: n });
        }
        inv_gap[n] = T::one() / c;
    }
    let sqrt_n1 = Matrix::from_real_diagonal(
        &(0..dim).map(|n| T::of(n + 1).sqrt()).collect::<Vec<_>>(),
    );
    let d_rebuilt = &(&sqrt_n1 * &Matrix::from_real_diagonal(&inv_gap)) * &a;
    let d_reconstruction = (&d_rebuilt - &d).max_abs();
    if d_reconstruction > construction_tol::<T>() * T::of(dim).sqrt() {
        return Err(GhaError::InvalidParameter(format!(
            "D reconstructed from A deviates from sqrt(n) rule by {d_reconstruction:e}"
        )));
    }

    let sqrt2 = T::SQRT_2();
    let xi = (&d + &d_dag).scale(re(length / sqrt2));
    let rho = (&d_dag - &d).scale(Complex::new(T::zero(), hbar / (sqrt2 * length)));

    Ok(AlgebraRep {
        system: spec.id(),
        dim,
        nilpotent: spec.max_level().is_some(),
        j0,
        a,
        a_dag,
        number,
        d,
        d_dag,
        xi,
        rho,
        length,
        hbar,
        d_reconstruction,
    })
}

impl<T: Real> AlgebraRep<T> {
    pub fn system(&self) -> SystemId {
        self.system
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn is_nilpotent(&self) -> bool {
        self.nilpotent
    }
    pub fn j0(&self) -> &Matrix<T> {
        &self.j0
    }
    pub fn a(&self) -> &Matrix<T> {
        &self.a
    }
    pub fn a_dag(&self) -> &Matrix<T> {
        &self.a_dag
    }
    pub fn number(&self) -> &Matrix<T> {
        &self.number
    }
    pub fn d(&self) -> &Matrix<T> {
        &self.d
    }
    pub fn d_dag(&self) -> &Matrix<T> {
        &self.d_dag
    }
    pub fn xi(&self) -> &Matrix<T> {
        &self.xi
    }
    pub fn rho(&self) -> &Matrix<T> {
        &self.rho
    }
    pub fn length(&self) -> T {
        self.length
    }
    pub fn hbar(&self) -> T {
        self.hbar
    }
    /// Max deviation between the `sqrt(n)` and the `A`-based construction
    /// of `D`.
    pub fn d_reconstruction_residual(&self) -> T {
        self.d_reconstruction
    }

    fn check_spec(&self, spec: &SpectrumModel<T>) -> Result<()> {
        if spec.id() != self.system {
            return Err(GhaError::DimensionMismatch(format!(
                "representation was built for {}, not {}",
                self.system,
                spec.id()
            )));
        }
        Ok(())
    }

    /// `f(J0)` with the nilpotent wrap on the top level.
    pub fn f_of_j0(&self, spec: &SpectrumModel<T>) -> Result<Matrix<T>> {
        self.check_spec(spec)?;
        let diag = (0..self.dim)
            .map(|n| spec.next_energy(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_real_diagonal(&diag))
    }
}

/// Casimir operator `A A^dag - f(J0)`.
pub fn casimir<T: Real>(rep: &AlgebraRep<T>, spec: &SpectrumModel<T>) -> Result<Matrix<T>> {
    let f = rep.f_of_j0(spec)?;
    Ok(&(rep.a() * rep.a_dag()) - &f)
}

/// `A^dag A - p^2`, which reproduces `J0` for the Morse system.
pub fn j0_from_ladder<T: Real>(rep: &AlgebraRep<T>, spec: &SpectrumModel<T>) -> Result<Matrix<T>> {
    rep.check_spec(spec)?;
    let p = spec.morse_p().ok_or(GhaError::WrongSystem {
        operation: "j0_from_ladder",
        system: spec.id(),
    })?;
    let shift = Matrix::identity(rep.dim()).scale(re(p * p));
    Ok(&(rep.a_dag() * rep.a()) - &shift)
}

/// Residual of one identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck<T> {
    pub name: &'static str,
    /// Max entry modulus on the columns of the interior basis vectors.
    pub residual: T,
    /// Same over the excluded truncation-edge columns, if any.
    pub boundary: Option<T>,
    /// Number of leading basis vectors the residual covers.
    pub interior: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraReport<T> {
    pub system: SystemId,
    pub dim: usize,
    pub tol: T,
    pub checks: Vec<IdentityCheck<T>>,
}

impl<T: Real> AlgebraReport<T> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck<T>> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One `identity,residual,boundary,interior,status` record per line,
    /// with a header.
    pub fn to_records(&self) -> String {
        let mut out = String::from("identity,residual,boundary,interior,status\n");
        for c in &self.checks {
            let boundary = c.boundary.map(|b| format!("{b:.6e}")).unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{},{:.6e},{},{},{}\n",
                c.name,
                c.residual,
                boundary,
                c.interior,
                if c.pass { "pass" } else { "fail" }
            ));
        }
        out
    }
}

impl<T: Real> fmt::Display for AlgebraReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "algebra check: system={} dim={} tol={:e}",
            self.system, self.dim, self.tol
        )?;
        for c in &self.checks {
            write!(
                f,
                "  [{}] {:<28} residual {:>12.3e} on n < {}",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                c.residual,
                c.interior
            )?;
            if let Some(b) = c.boundary {
                write!(f, "  (edge {b:.3e}, excluded)")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "result: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

struct Checker<T> {
    dim: usize,
    tol: T,
    checks: Vec<IdentityCheck<T>>,
}

impl<T: Real> Checker<T> {
    /// Records `|lhs - rhs|` on basis vectors `0..interior`, relative to the
    /// larger of the two sides (and at least 1).
    fn push(&mut self, name: &'static str, lhs: &Matrix<T>, rhs: &Matrix<T>, interior: usize) {
        let m = lhs - rhs;
        let scale = |from, to| {
            T::one()
                .max(column_max(lhs, from, to))
                .max(column_max(rhs, from, to))
        };
        let residual = column_max(&m, 0, interior) / scale(0, interior);
        let boundary = (interior < self.dim)
            .then(|| column_max(&m, interior, self.dim) / scale(interior, self.dim));
        self.checks.push(IdentityCheck {
            name,
            residual,
            boundary,
            interior,
            pass: residual <= self.tol,
        });
    }

    fn push_flag(&mut self, name: &'static str, ok: bool) {
        self.checks.push(IdentityCheck {
            name,
            residual: if ok { T::zero() } else { T::one() },
            boundary: None,
            interior: self.dim,
            pass: ok,
        });
    }
}

fn column_max<T: Real>(m: &Matrix<T>, from: usize, to: usize) -> T {
    let mut best = T::zero();
    for i in 0..m.rows() {
        for j in from..to {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

/// Evaluates every algebra relation on the representation.
///
/// Relations are asserted on basis vectors `|n>` with `n <= dim - 2`; the
/// top vector, where truncation breaks `[D, D^dag] = I`, is reported as
/// the boundary residual. Casimir commutators involve `A A^dag` at the top
/// level and are asserted on `n <= dim - 3` for unbounded spectra. For
/// nilpotent spectra the wrap `f(e_{n_max}) = e_0` makes `Gamma` exact on
/// the whole space.
pub fn verify_algebra<T: Real>(
    rep: &AlgebraRep<T>,
    spec: &SpectrumModel<T>,
    tol: T,
) -> Result<AlgebraReport<T>> {
    rep.check_spec(spec)?;
    if !(tol > T::zero()) {
        return Err(GhaError::InvalidParameter("tolerance must be positive".into()));
    }
    let dim = rep.dim();
    let interior = dim - 1;
    let mut ck = Checker {
        dim,
        tol,
        checks: Vec::new(),
    };

    let j0 = rep.j0();
    let a = rep.a();
    let ad = rep.a_dag();
    let f = rep.f_of_j0(spec)?;
    let eye = Matrix::identity(dim);

    ck.push("adjoint(A) = A_dag", &a.adjoint(), ad, dim);
    ck.push("adjoint(D) = D_dag", &rep.d().adjoint(), rep.d_dag(), dim);
    ck.push("xi hermitian", &rep.xi().adjoint(), rep.xi(), dim);
    ck.push("rho hermitian", &rep.rho().adjoint(), rep.rho(), dim);

    ck.push("J0 A_dag = A_dag f(J0)", &(j0 * ad), &(ad * &f), interior);
    ck.push("A J0 = f(J0) A", &(a * j0), &(&f * a), interior);
    ck.push("[A,A_dag] = f(J0) - J0", &commutator(a, ad)?, &(&f - j0), interior);

    let n = rep.number();
    let d = rep.d();
    let dd = rep.d_dag();
    let zero = Matrix::zeros(dim, dim);
    ck.push("[N,D] = -D", &commutator(n, d)?, &d.scale(re(-T::one())), interior);
    ck.push("[N,D_dag] = D_dag", &commutator(n, dd)?, dd, interior);
    ck.push("[D,D_dag] = I", &commutator(d, dd)?, &eye, interior);
    let i_hbar = eye.scale(Complex::new(T::zero(), rep.hbar()));
    ck.push("[xi,rho] = i hbar I", &commutator(rep.xi(), rep.rho())?, &i_hbar, interior);

    let mut d_resid = Matrix::zeros(dim, dim);
    d_resid[(0, 0)] = re(rep.d_reconstruction_residual());
    ck.push("D from A (sqrt(N+1) gap^-1/2 A)", &d_resid, &zero, dim);

    let gamma = casimir(rep, spec)?;
    let cas_interior = if rep.is_nilpotent() { interior } else { dim - 2 };
    ck.push("[Gamma,J0] = 0", &(&gamma * j0), &(j0 * &gamma), cas_interior);
    ck.push("[Gamma,A] = 0", &(&gamma * a), &(a * &gamma), cas_interior);
    ck.push("[Gamma,A_dag] = 0", &(&gamma * ad), &(ad * &gamma), cas_interior);

    let sqrt_diag = |sign: T| {
        j0.map_diagonal(|_, e| {
            let v = sign * e.re;
            if v < T::zero() {
                Err(GhaError::Domain {
                    system: spec.id(),
                    x: e.re.to_f64().unwrap_or(f64::NAN),
                })
            } else {
                Ok(re(v.sqrt()))
            }
        })
    };

    match spec.id() {
        SystemId::SquareWell => {
            let b = spec.energy_scale().expect("square well has b");
            let sqrt_h = sqrt_diag(T::one())?;
            let two_sb = re(T::lit(2.0) * b.sqrt());
            let rhs7 = &(ad * &sqrt_h).scale(two_sb) + &ad.scale(re(b));
            ck.push("[H,A_dag] = 2sqrt(b)A_dag sqrt(H) + bA_dag", &commutator(j0, ad)?, &rhs7, interior);
            let rhs8 = &(&sqrt_h * a).scale(-two_sb) - &a.scale(re(b));
            ck.push("[H,A] = -2sqrt(b)sqrt(H)A - bA", &commutator(j0, a)?, &rhs8, interior);
            let rhs9 = &sqrt_h.scale(two_sb) + &eye.scale(re(b));
            ck.push("[A,A_dag] = 2sqrt(b)sqrt(H) + b", &commutator(a, ad)?, &rhs9, interior);
        }
        SystemId::Morse => {
            let s = sqrt_diag(-T::one())?;
            let two = re(T::lit(2.0));
            let rhs88 = &(ad * &s).scale(two) - ad;
            ck.push("[J0,A_dag] = 2A_dag sqrt(-J0) - A_dag", &commutator(j0, ad)?, &rhs88, interior);
            let rhs89 = &(&s * a).scale(-two) + a;
            ck.push("[J0,A] = -2sqrt(-J0)A + A", &commutator(j0, a)?, &rhs89, interior);
            let rhs90 = &s.scale(two) - &eye;
            ck.push("[A,A_dag] = 2sqrt(-J0) - I", &commutator(a, ad)?, &rhs90, interior);
            ck.push("J0 = A_dag A - p^2", &j0_from_ladder(rep, spec)?, j0, dim);
            let n_max = spec.max_level().expect("morse has n_max");
            ck.push_flag("(A_dag)^(n_max+1) = 0", ad.pow(n_max + 1).is_zero());
            ck.push_flag("(A_dag)^n_max != 0", !ad.pow(n_max).is_zero());
        }
        _ => {}
    }

    Ok(AlgebraReport {
        system: spec.id(),
        dim,
        tol,
        checks: ck.checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_ladder_entries() {
        let spec = SpectrumModel::<f64>::harmonic();
        let rep = build_rep(&spec, 4).unwrap();
        for n in 0..3 {
            assert!((rep.a_dag()[(n + 1, n)].re - ((n + 1) as f64).sqrt()).abs() < 1e-15);
        }
        assert!(rep.a_dag()[(3, 3)].norm() == 0.0);
    }

    #[test]
    fn morse_entry_and_dimension() {
        let spec = SpectrumModel::<f64>::morse(7.59).unwrap();
        let rep = build_rep(&spec, 8).unwrap();
        assert!((rep.a_dag()[(1, 0)].re - 14.18f64.sqrt()).abs() < 1e-12);
        assert!(matches!(build_rep(&spec, 9), Err(GhaError::DimensionMismatch(_))));
    }

    #[test]
    fn type1_diagonal() {
        let spec = SpectrumModel::<f64>::type1(1.0).unwrap();
        let rep = build_rep(&spec, 3).unwrap();
        let diag: Vec<f64> = rep.j0().diagonal().iter().map(|c| c.re).collect();
        assert_eq!(diag[0], 0.0);
        assert_eq!(diag[1], 0.5);
        assert!((diag[2] - 2.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn dd_dag_boundary_defect() {
        let spec = SpectrumModel::<f64>::harmonic();
        let rep = build_rep(&spec, 5).unwrap();
        let c = commutator(rep.d(), rep.d_dag()).unwrap();
        for i in 0..4 {
            assert!((c[(i, i)].re - 1.0).abs() < 1e-14);
        }
        assert!((c[(4, 4)].re + 4.0).abs() < 1e-14);
    }

    #[test]
    fn morse_commutator_matches_closed_form() {
        let spec = SpectrumModel::<f64>::morse(7.59).unwrap();
        let rep = build_rep(&spec, 8).unwrap();
        let c = commutator(rep.j0(), rep.a_dag()).unwrap();
        for n in 0..7 {
            let want = rep.a_dag()[(n + 1, n)].re * (2.0 * (7.59 - n as f64) - 1.0);
            assert!((c[(n + 1, n)].re - want).abs() < 1e-11);
        }
    }

    #[test]
    fn harmonic_casimir_is_constant() {
        let spec = SpectrumModel::<f64>::harmonic();
        let rep = build_rep(&spec, 6).unwrap();
        let g = casimir(&rep, &spec).unwrap();
        for n in 0..5 {
            assert!((g[(n, n)].re + spec.ground_energy()).abs() < 1e-14);
        }
    }

    #[test]
    fn verify_examples() {
        let h = SpectrumModel::<f64>::harmonic();
        assert!(verify_algebra(&build_rep(&h, 30).unwrap(), &h, 1e-12).unwrap().passed());
        let q = SpectrumModel::<f64>::q_deformed(0.5).unwrap();
        assert!(verify_algebra(&build_rep(&q, 30).unwrap(), &q, 1e-12).unwrap().passed());
        let m = SpectrumModel::<f64>::morse(7.59).unwrap();
        let report = verify_algebra(&build_rep(&m, 8).unwrap(), &m, 1e-12).unwrap();
        assert!(report.passed(), "{report}");
        let edge = report.get("[A,A_dag] = 2sqrt(-J0) - I").unwrap();
        assert!(edge.boundary.unwrap() > 1.0);
    }

    #[test]
    fn j0_from_ladder_morse_only() {
        let m = SpectrumModel::<f64>::morse(3.2).unwrap();
        let rep = build_rep(&m, 4).unwrap();
        let j = j0_from_ladder(&rep, &m).unwrap();
        assert!((j[(0, 0)].re + 3.2 * 3.2).abs() < 1e-12);
        for n in 0..4 {
            assert!((j[(n, n)].re + (3.2 - n as f64).powi(2)).abs() < 1e-12);
        }
        let h = SpectrumModel::<f64>::harmonic();
        let hr = build_rep(&h, 4).unwrap();
        assert!(matches!(j0_from_ladder(&hr, &h), Err(GhaError::WrongSystem { .. })));
    }

    #[test]
    fn records_format() {
        let h = SpectrumModel::<f64>::harmonic();
        let report = verify_algebra(&build_rep(&h, 4).unwrap(), &h, 1e-12).unwrap();
        let rec = report.to_records();
        let mut lines = rec.lines();
        assert_eq!(lines.next(), Some("identity,residual,boundary,interior,status"));
        assert!(lines.all(|l| l.ends_with(",pass")));
    }

    #[test]
    fn tabulated_dimension_limit() {
        let t = SpectrumModel::<f64>::tabulated(vec![0.0, 1.0, 3.0, 4.0]).unwrap();
        assert!(build_rep(&t, 3).is_ok());
        assert!(build_rep(&t, 4).is_err());
        let report = verify_algebra(&build_rep(&t, 3).unwrap(), &t, 1e-12).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn f32_representation() {
        let spec = SpectrumModel::<f32>::type2(1.0).unwrap();
        let rep = build_rep(&spec, 20).unwrap();
        assert!(verify_algebra(&rep, &spec, 1e-4).unwrap().passed());
    }
}
