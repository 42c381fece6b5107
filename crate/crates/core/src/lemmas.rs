//! Checks of the quotient construction `X → A = X/H` for an isotropic
//! `H ≤ X_2` of a principally polarized `X`, and the degree ledger of the
//! composite `f_C^∨ ∘ λ_{L_A} ∘ f_D`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::isogeny::{self, Isogeny};
use crate::lattice::PolarizedLattice;
use crate::matrix::RatMatrix;
use crate::torsion::{self, FiniteSubgroup, PairingContext, TorsionPoint};

/// One checked identity with its supporting values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub claim: String,
    pub pass: bool,
    pub witnesses: Vec<(String, String)>,
}

impl Claim {
    fn new(claim: &str, pass: bool) -> Self {
        Claim { claim: claim.into(), pass, witnesses: Vec::new() }
    }

    fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.witnesses.push((key.into(), value.to_string()));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub claims: Vec<Claim>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }
}

const TWO: PairingContext = PairingContext::Torsion(2);

/// `X`, `H`, `H^⊥ ⊂ X_2`, `A = X/H` polarized by the descent of `2E`, and
/// `f : X → A`.
#[derive(Clone, Debug)]
pub struct QuotientSetup {
    pub x: PolarizedLattice,
    pub h: FiniteSubgroup,
    pub h_perp: FiniteSubgroup,
    pub a: PolarizedLattice,
    pub f: Isogeny,
}

impl QuotientSetup {
    pub fn new(x: &PolarizedLattice, h: &FiniteSubgroup) -> Result<Self> {
        if !x.pol_type().is_principal() {
            return Err(Error::InvalidType(format!("expected a principal polarization, got {}", x.pol_type())));
        }
        let (a, f) = isogeny::quotient_by_subgroup(x, h, TWO)?;
        let h_perp = torsion::orthogonal_complement(x, h, TWO)?;
        Ok(QuotientSetup { x: x.clone(), h: h.clone(), h_perp, a, f })
    }

    /// `A' = (Λ + lifts(H^⊥))` polarized by pullback along `x ↦ 2x` into `X`.
    pub fn a_prime(&self) -> Result<(PolarizedLattice, Isogeny)> {
        isogeny::pullback_quotient(&self.x, &self.h_perp, 2)
    }
}

/// `Some(c)` when `a = c·b` entrywise.
pub fn scalar_ratio(a: &RatMatrix, b: &RatMatrix) -> Option<BigRational> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return None;
    }
    let mut ratio: Option<BigRational> = None;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let (x, y) = (&a[(i, j)], &b[(i, j)]);
            if y.is_zero() {
                if !x.is_zero() {
                    return None;
                }
                continue;
            }
            let r = x / y;
            match &ratio {
                Some(q) if *q != r => return None,
                None => ratio = Some(r),
                _ => {}
            }
        }
    }
    ratio
}

fn ratio_text(a: &Isogeny, b: &Isogeny) -> String {
    match scalar_ratio(a.matrix(), b.matrix()) {
        Some(r) => r.to_string(),
        None => "not a scalar multiple".into(),
    }
}

/// Image of `S ≤ X` in `A = X/H` (same ambient space).
pub fn image_in(a: &PolarizedLattice, s: &FiniteSubgroup) -> Result<FiniteSubgroup> {
    let gens = s
        .generators()
        .iter()
        .map(|p| TorsionPoint::from_ambient(a, &p.lift()))
        .collect::<Result<Vec<_>>>()?;
    FiniteSubgroup::generated(a, gens)
}

fn structure(s: &FiniteSubgroup) -> String {
    let f: Vec<String> = s.invariant_factors().iter().map(|d| d.to_string()).collect();
    format!("({})", f.join(","))
}

/// `K(L_A) = H^⊥/H` as subgroups of `A`.
pub fn verify_lemma_ker(x: &PolarizedLattice, h: &FiniteSubgroup) -> Result<Report> {
    let s = QuotientSetup::new(x, h)?;
    let k = torsion::kernel_k(&s.a);
    let img = image_in(&s.a, &s.h_perp)?;
    let eq = k.equals(&img)?;
    let claim = Claim::new("K(L_A) = H^perp / H", eq)
        .with("type(A)", s.a.pol_type())
        .with("|H|", s.h.order())
        .with("|H^perp|", s.h_perp.order())
        .with("|K(L_A)|", k.order())
        .with("K(L_A) structure", structure(&k));
    Ok(Report { name: "lemma-ker".into(), claims: alloc::vec![claim] })
}

/// `A^∨` against `A' = X/H^⊥`, as lattices and as polarized lattices, and
/// `f' = f^∨`.
pub fn verify_dual_quotient_identity(x: &PolarizedLattice, h: &FiniteSubgroup) -> Result<Report> {
    let s = QuotientSetup::new(x, h)?;
    let a_dual = isogeny::dual_polarized(&s.a)?;
    let (a_prime, f_prime) = s.a_prime()?;
    let f_dual = isogeny::dual_isogeny(&s.f)?;
    let lattice = a_dual.same_lattice(&a_prime);
    let form = lattice && a_dual.ambient_form() == a_prime.ambient_form();
    let form_ratio = scalar_ratio(a_dual.ambient_form(), a_prime.ambient_form())
        .map_or("not a scalar multiple".to_string(), |r| r.to_string());
    let claims = alloc::vec![
        Claim::new("lattice(A^dual) = lattice(X/H^perp)", lattice)
            .with("|H^perp|", s.h_perp.order())
            .with("covolume ratio", a_prime.covolume() / a_dual.covolume()),
        Claim::new("form(A^dual) = form(X/H^perp)", form)
            .with("type(A^dual)", a_dual.pol_type())
            .with("type(A')", a_prime.pol_type())
            .with("form ratio", form_ratio),
        Claim::new("f' = f^dual", f_prime.same_map(&f_dual))
            .with("deg f'", f_prime.degree())
            .with("deg f^dual", f_dual.degree()),
    ];
    Ok(Report { name: "dual-quotient".into(), claims })
}

/// The three identities
/// (i) `f^∨ λ_{L_A} f = 2 λ_Θ`,
/// (ii) `f λ_Θ^{-1} f^∨ = λ_{L_{A^∨}}` (through `A^∨∨ ≅ A`),
/// (iii) `λ_{L_A}^∨ λ_{L_{A^∨}} λ_{L_A} = 2 λ_{L_A}`,
/// with maps written in application order.
pub fn verify_pullback_lemmas(x: &PolarizedLattice, h: &FiniteSubgroup) -> Result<Report> {
    let s = QuotientSetup::new(x, h)?;
    let lam_x = isogeny::lambda_isogeny(&s.x)?;
    let lam_a = isogeny::lambda_isogeny(&s.a)?;
    let f_dual = isogeny::dual_isogeny(&s.f)?;
    let a_dual = lam_a.target().clone();
    let lam_a_dual = isogeny::lambda_isogeny(&a_dual)?;
    let back = isogeny::double_dual_identification(&s.a)?;

    let lhs1 = s.f.then(&lam_a)?.then(&f_dual)?;
    let rhs1 = lam_x.scaled(2)?;
    let lhs2 = f_dual.then(&lam_x.inverse()?)?.then(&s.f)?;
    let rhs2 = lam_a_dual.then(&back)?;
    let lam_a_vee = isogeny::dual_isogeny(&lam_a)?;
    let lhs3 = lam_a.then(&lam_a_dual)?.then(&lam_a_vee)?;
    let rhs3 = lam_a.scaled(2)?;

    let claims = alloc::vec![
        Claim::new("f^dual . lambda_A . f = 2 lambda_Theta", lhs1.same_map(&rhs1))
            .with("lhs/lambda_Theta", ratio_text(&lhs1, &lam_x))
            .with("deg lhs", lhs1.degree()),
        Claim::new("f . lambda_Theta^-1 . f^dual = lambda_{A^dual}", lhs2.same_map(&rhs2))
            .with("lhs/rhs", ratio_text(&lhs2, &rhs2))
            .with("d1*dg of A", s.a.pol_type().dual_scale()),
        Claim::new("lambda_A^dual . lambda_{A^dual} . lambda_A = 2 lambda_A", lhs3.same_map(&rhs3))
            .with("lhs/lambda_A", ratio_text(&lhs3, &lam_a))
            .with("deg lhs", lhs3.degree()),
    ];
    Ok(Report { name: "pullback-lemmas".into(), claims })
}

/// A principal `Y` and an isotropic `H_D ≤ Y_2` with `Y/H_D^⊥ = A` as
/// polarized lattices, for `A` of type `(1,…,1,2,…,2)`.
pub fn shared_d_side(a: &PolarizedLattice) -> Result<(PolarizedLattice, FiniteSubgroup)> {
    let g = a.genus();
    let d = a.pol_type().divisors();
    if d.iter().any(|x| *x != BigInt::from(1) && *x != BigInt::from(2)) {
        return Err(Error::InvalidType(format!("expected entries 1 or 2, got {}", a.pol_type())));
    }
    let sb = a.symplectic_basis();
    let two = BigRational::from_integer(BigInt::from(2));
    let rows: Vec<Vec<BigRational>> = (0..2 * g)
        .map(|i| {
            let k = i % g;
            let lam = i < g;
            let factor = if lam || d[k] == BigInt::from(1) { two.clone() } else { BigRational::from_integer(BigInt::from(1)) };
            sb.row(i).iter().map(|v| v * &factor).collect()
        })
        .collect();
    let basis = RatMatrix::from_rows(rows).expect("square");
    let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
    let y = PolarizedLattice::from_ambient(basis, &a.ambient_form().scale(&quarter))?;
    let coords = &a.basis().clone() * y.basis_inverse();
    let h_perp = FiniteSubgroup::from_superlattice(&y, &crate::intlin::canonical_basis(&coords))?;
    let h = torsion::orthogonal_complement(&y, &h_perp, TWO)?;
    Ok((y, h))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeLedger {
    pub genus: usize,
    pub deg_f_d: BigInt,
    pub deg_lambda: BigInt,
    pub deg_f_c_dual: BigInt,
    pub composite: BigInt,
    /// Degree of the composed map when both sides share the quotient `A`.
    pub composite_direct: Option<BigInt>,
    /// `m` with `m^{2g}` equal to the composite degree, if any.
    pub multiplication_root: Option<BigInt>,
}

impl DegreeLedger {
    pub fn claims(&self) -> Vec<Claim> {
        let mut out = alloc::vec![Claim::new(
            "composite = deg f_D * deg lambda * deg f_C^dual",
            self.composite == &(&self.deg_f_d * &self.deg_lambda) * &self.deg_f_c_dual,
        )
        .with("deg f_D", &self.deg_f_d)
        .with("deg lambda_A", &self.deg_lambda)
        .with("deg f_C^dual", &self.deg_f_c_dual)
        .with("composite", &self.composite)];
        if let Some(d) = &self.composite_direct {
            out.push(Claim::new("degree of the composed map = composite", *d == self.composite).with("direct", d));
        }
        out.push(
            Claim::new("composite is not the degree of a multiplication map", self.multiplication_root.is_none())
                .with("2g", 2 * self.genus)
                .with("root", self.multiplication_root.as_ref().map_or("none".to_string(), |m| m.to_string())),
        );
        out
    }
}

/// Degrees of `f_D : X_D → X_D/H_D^⊥`, `λ_{L_A}` and `f_C^∨` for
/// `A = X_C/H_C`, their product, and the multiplication-map obstruction.
pub fn degree_ledger(
    x_c: &PolarizedLattice,
    h_c: &FiniteSubgroup,
    x_d: &PolarizedLattice,
    h_d: &FiniteSubgroup,
) -> Result<DegreeLedger> {
    if x_c.genus() != x_d.genus() {
        return Err(Error::GenusMismatch(x_c.genus(), x_d.genus()));
    }
    let c = QuotientSetup::new(x_c, h_c)?;
    let lam = isogeny::lambda_isogeny(&c.a)?;
    let f_c_dual = isogeny::dual_isogeny(&c.f)?;
    if !x_d.pol_type().is_principal() {
        return Err(Error::InvalidType(format!("expected a principal polarization, got {}", x_d.pol_type())));
    }
    if !torsion::is_totally_isotropic(x_d, h_d, TWO)? {
        return Err(Error::NotIsotropic);
    }
    let h_d_perp = torsion::orthogonal_complement(x_d, h_d, TWO)?;
    let (a_d, _) = isogeny::pullback_quotient(x_d, &h_d_perp, 2)?;
    let f_d = Isogeny::ambient_identity(x_d, &a_d)?;
    let composite = &(f_d.degree() * lam.degree()) * f_c_dual.degree();
    let composite_direct = if a_d.same_polarized(&c.a) {
        Some(f_d.then(&lam)?.then(&f_c_dual)?.degree().clone())
    } else {
        None
    };
    Ok(DegreeLedger {
        genus: x_c.genus(),
        deg_f_d: f_d.degree().clone(),
        deg_lambda: lam.degree().clone(),
        deg_f_c_dual: f_c_dual.degree().clone(),
        multiplication_root: isogeny::multiplication_degree_obstruction(&composite, x_c.genus()),
        composite,
        composite_direct,
    })
}

/// The ledger for `X_C` standard principal of genus `g`, `H_C = ⟨b_1/2, …,
/// b_k/2⟩`, and the D side built over the same quotient.
pub fn standard_ledger(g: usize, k: usize) -> Result<DegreeLedger> {
    let x = PolarizedLattice::standard_principal(g)?;
    let h = standard_subgroup(&x, k)?;
    let s = QuotientSetup::new(&x, &h)?;
    let (y, h_d) = shared_d_side(&s.a)?;
    degree_ledger(&x, &h, &y, &h_d)
}

/// `⟨b_1/2, …, b_k/2⟩` for the first `k` basis vectors (isotropic when the
/// basis is standard symplectic and `k ≤ g`).
pub fn standard_subgroup(x: &PolarizedLattice, k: usize) -> Result<FiniteSubgroup> {
    if k > x.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: k });
    }
    FiniteSubgroup::generated(x, (0..k).map(|i| TorsionPoint::basis_fraction(x, i, 2)).collect())
}

/// A random principal lattice of genus `g` with a random isotropic
/// `H ≤ X_2` of order `2^k`.
pub fn random_instance(g: usize, k: usize, seed: u64) -> Result<(PolarizedLattice, FiniteSubgroup)> {
    let x = PolarizedLattice::random(&crate::lattice::PolType::principal(g), seed);
    let space = crate::symplectic_f2::SymplecticSpaceF2::from_torsion(&x)?;
    let h = space.random_isotropic_subspace(k, seed ^ 0x5eed)?.to_subgroup(&x)?;
    Ok((x, h))
}
