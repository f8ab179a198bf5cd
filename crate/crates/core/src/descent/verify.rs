use std::collections::BTreeMap;

use serde::Serialize;

use super::cosimplicial::{cech, PresheafCech};
use super::presheaf::CoverPresheaf;
use super::totalization::{required_cutoff, tot, tot_cech_iso, tw, tw_to_tot, whitney_section};
use super::DescentError;
use crate::complexes::{cocone, direct_sum, homology, is_quasi_iso, ChainMap, Complex};
use crate::exec::Execution;
use crate::linalg::SparseMatrix;
use crate::scalars::{Coeff, Rational};

/// Outcome of checking that `F(K) → Čech(F)` is a quasi-isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub members: usize,
    pub coefficients: String,
    pub holds: bool,
    pub witness_degree: Option<i32>,
    pub global_betti: BTreeMap<i32, usize>,
    pub cech_betti: BTreeMap<i32, usize>,
    pub cone_betti: BTreeMap<i32, usize>,
}

pub fn verify_descent(f: &CoverPresheaf) -> Result<DescentReport, DescentError> {
    let c = cech(f)?;
    let cert = is_quasi_iso(c.augmentation())?;
    Ok(DescentReport {
        members: f.n(),
        coefficients: Rational::ring_name(&()),
        holds: cert.is_quasi_iso,
        witness_degree: cert.witness_degree,
        global_betti: cert.source_betti,
        cech_betti: cert.target_betti,
        cone_betti: cert.cone_betti,
    })
}

/// Exact checks of `Tot(nerve F) ≅ Čech(F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TotCechCertificate {
    pub bijective: bool,
    pub chain_map: bool,
    pub intertwines_augmentations: bool,
    pub tot_betti: BTreeMap<i32, usize>,
    pub cech_betti: BTreeMap<i32, usize>,
}

impl TotCechCertificate {
    pub fn passed(&self) -> bool {
        self.bijective && self.chain_map && self.intertwines_augmentations
    }
}

pub fn check_tot_cech(f: &CoverPresheaf, exec: Execution) -> Result<TotCechCertificate, DescentError> {
    let c = cech(f)?;
    let t = tot(&c.nerve.cosimplicial, exec)?;
    t.complex.validate()?;
    let iso = tot_cech_iso(&t, &c.cech)?;
    let chain_map = iso.validate().is_ok();
    let tot_aug = t.augmentation.as_ref().expect("nerves are augmented");
    let intertwines = tot_aug.then(&iso)? == *c.augmentation();
    Ok(TotCechCertificate {
        bijective: iso.is_bijective(),
        chain_map,
        intertwines_augmentations: intertwines,
        tot_betti: homology(&t.complex).betti(),
        cech_betti: homology(c.complex()).betti(),
    })
}

/// Exact checks of the comparison `TW^{≤P} → Tot` at several cutoffs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwCertificate {
    pub cutoffs: Vec<usize>,
    pub tw_betti: Vec<BTreeMap<i32, usize>>,
    pub tot_betti: BTreeMap<i32, usize>,
    /// Betti tables agree at every cutoff.
    pub stable: bool,
    /// Smallest tested cutoff from which the Betti table no longer changes.
    pub stabilizes_at: Option<usize>,
    pub quasi_iso: Vec<bool>,
    pub augmentations_commute: Vec<bool>,
    /// `(id ⊗ I) ∘ (id ⊗ E) = id` on `Tot`.
    pub section_identity: Vec<bool>,
}

impl TwCertificate {
    pub fn passed(&self) -> bool {
        self.stable
            && self.quasi_iso.iter().all(|b| *b)
            && self.augmentations_commute.iter().all(|b| *b)
            && self.section_identity.iter().all(|b| *b)
    }
}

/// Runs the TW comparison for each cutoff (default: `N` and `N + 1`).
pub fn check_tw_tot(f: &CoverPresheaf, cutoffs: &[usize], exec: Execution) -> Result<TwCertificate, DescentError> {
    let c = cech(f)?;
    let dc = &c.nerve.cosimplicial;
    let t = tot(dc, exec)?;
    let tot_aug = t.augmentation.clone().expect("nerves are augmented");
    let mut cert = TwCertificate {
        cutoffs: cutoffs.to_vec(),
        tw_betti: Vec::new(),
        tot_betti: homology(&t.complex).betti(),
        stable: true,
        stabilizes_at: None,
        quasi_iso: Vec::new(),
        augmentations_commute: Vec::new(),
        section_identity: Vec::new(),
    };
    for &p in cutoffs {
        let w = tw(dc, p.max(required_cutoff(dc)), exec)?;
        w.complex.validate()?;
        let i = tw_to_tot(&w, &t)?;
        let e = whitney_section(&t, &w)?;
        cert.tw_betti.push(homology(&w.complex).betti());
        cert.quasi_iso.push(is_quasi_iso(&i)?.is_quasi_iso);
        let w_aug = w.augmentation.as_ref().expect("nerves are augmented");
        cert.augmentations_commute.push(w_aug.then(&i)? == tot_aug);
        cert.section_identity.push(e.then(&i)? == ChainMap::identity(&t.complex));
    }
    cert.stable = cert.tw_betti.iter().all(|b| *b == cert.tot_betti);
    let last = cert.tw_betti.last().cloned();
    cert.stabilizes_at = last.and_then(|l| {
        let first = cert.tw_betti.iter().rposition(|b| *b != l).map(|i| i + 1).unwrap_or(0);
        cert.cutoffs.get(first).copied()
    });
    Ok(cert)
}

/// The decomposition `Čech(K_1..K_N) ≅ cocone(F(K_1) ⊕ Čech(K_2..K_N) → Čech(K_1∩K_2, …, K_1∩K_N))`.
#[derive(Clone, Debug)]
pub struct CoconeDecomposition {
    /// `F(K_1) ⊕ Čech(K_2..K_N) → Čech(K_1∩K_2, …)`, `(a, y) ↦ res(y) − aug(a)`.
    pub map: ChainMap<Rational>,
    pub cocone: Complex<Rational>,
    /// The block permutation `cocone → Čech(K_1..K_N)`.
    pub iso: ChainMap<Rational>,
    pub cech: PresheafCech,
    /// Čech complexes of the remaining members and of the link of `K_1`.
    pub rest: PresheafCech,
    pub link: PresheafCech,
}

/// Works for any `N ≥ 2`.
pub(crate) fn decompose(f: &CoverPresheaf) -> Result<CoconeDecomposition, DescentError> {
    let n = f.n();
    if n < 2 {
        return Err(DescentError::BadCover("the cocone decomposition needs at least two members".into()));
    }
    let others: Vec<usize> = (1..n).collect();
    let full = cech(f)?;
    let rest = cech(&f.restrict_members(&others)?)?;
    let link = cech(&f.link(0)?)?;
    let a = f.value(1);
    let (y, z) = (rest.complex(), link.complex());
    let sum = direct_sum(&(), &[a.clone(), y.clone()])?;
    let lift = |j: u32| j << 1;
    let k = n - 1;
    // res: Čech(K_2..K_N) → Čech(K_1∩K_2, …), same index set, restricting F(K_J) → F(K_1 ∩ K_J).
    let mut maps = BTreeMap::new();
    for deg in sum.complex.degrees() {
        let mut m = SparseMatrix::zeros(z.dim(deg), sum.complex.dim(deg));
        let aug = link.augmentation().map(deg).neg();
        m.add_block(0, sum.offset(deg, 0), &aug);
        for j in 1u32..1 << k {
            let (yo, yd) = rest.block(j, deg);
            let (zo, zd) = link.block(j, deg);
            if yd * zd == 0 {
                continue;
            }
            let p = j.count_ones() as i32 - 1;
            let r = f.restriction(lift(j), lift(j) | 1).map(deg - p);
            m.add_block(zo, sum.offset(deg, 1) + yo, &r);
        }
        maps.insert(deg, m);
    }
    let map = ChainMap::new(sum.complex.clone(), z.clone(), 0, maps)?;
    map.validate()?;
    let (cone_complex, _) = cocone(&map)?;
    // cocone^n = A^n ⊕ Y^n ⊕ Z^{n−1}
    let target = full.complex();
    let mut iso_maps = BTreeMap::new();
    for deg in cone_complex.degrees() {
        let mut m = SparseMatrix::zeros(target.dim(deg), cone_complex.dim(deg));
        let id = |d: usize| SparseMatrix::<Rational>::identity(d, &());
        let (ao, ad) = full.block(1, deg);
        m.add_block(ao, sum.offset(deg, 0), &id(ad));
        for j in 1u32..1 << k {
            let (yo, yd) = rest.block(j, deg);
            let (fo, fd) = full.block(lift(j), deg);
            debug_assert_eq!(yd, fd);
            m.add_block(fo, sum.offset(deg, 1) + yo, &id(yd));
            let (zo, zd) = link.block(j, deg - 1);
            let (fo, fd) = full.block(lift(j) | 1, deg);
            debug_assert_eq!(zd, fd);
            m.add_block(fo, sum.complex.dim(deg) + zo, &id(zd));
        }
        iso_maps.insert(deg, m);
    }
    let iso = ChainMap::new(cone_complex.clone(), target.clone(), 0, iso_maps)?;
    Ok(CoconeDecomposition { map, cocone: cone_complex, iso, cech: full, rest, link })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InclusionExclusionCertificate {
    pub members: usize,
    pub bijective: bool,
    pub chain_map: bool,
    pub cocone_betti: BTreeMap<i32, usize>,
    pub cech_betti: BTreeMap<i32, usize>,
}

impl InclusionExclusionCertificate {
    pub fn passed(&self) -> bool {
        self.bijective && self.chain_map
    }
}

/// Builds the cocone and its isomorphism to `Čech(K_1..K_N)` and checks it
/// exactly. Needs `N > 2`.
pub fn inclusion_exclusion(f: &CoverPresheaf) -> Result<InclusionExclusionCertificate, DescentError> {
    if f.n() <= 2 {
        return Err(DescentError::BadCover(format!("inclusion–exclusion needs more than two members, got {}", f.n())));
    }
    let dec = decompose(f)?;
    Ok(InclusionExclusionCertificate {
        members: f.n(),
        bijective: dec.iso.is_bijective(),
        chain_map: dec.iso.validate().is_ok(),
        cocone_betti: homology(&dec.cocone).betti(),
        cech_betti: homology(dec.cech.complex()).betti(),
    })
}
