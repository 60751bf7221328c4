//! Factorizations, exactness of sequences and the diagram lemmas of stringent categories,
//! each phrased as a decision procedure over a [`Backend`].

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{Backend, Mor};
use crate::error::{Error, Result};

/// Why a sequence `A_k → … → A_0` fails to be acyclic; positions are source indices, so
/// position `i` names the map `A_i → A_{i−1}` or the object `A_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "cause", rename_all = "snake_case")]
pub enum AcyclicFailure {
    NotComposable { position: usize },
    NotAdmissible { position: usize },
    NotShortExact { position: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum SequenceClass {
    NotAcyclic(AcyclicFailure),
    Acyclic,
    LeftExact,
    RightExact,
    Exact,
}

impl SequenceClass {
    pub fn is_acyclic(&self) -> bool {
        !matches!(self, SequenceClass::NotAcyclic(_))
    }

    pub fn is_left_exact(&self) -> bool {
        matches!(self, SequenceClass::LeftExact | SequenceClass::Exact)
    }

    pub fn is_right_exact(&self) -> bool {
        matches!(self, SequenceClass::RightExact | SequenceClass::Exact)
    }
}

/// `f = mono ∘ epi` through the coimage, or `None` when `f` is not admissible.
pub fn factor_admissible(b: Backend, f: &Mor) -> Option<(Mor, Mor)> {
    let epi = b.cokernel(&b.kernel(f)?)?;
    let mono = b.descend_through_epi(&epi, f)?;
    (b.is_adm_epi(&epi) && b.is_adm_mono(&mono)).then_some((epi, mono))
}

/// The comparison map `coim(f) → im(f)`, when both exist.
pub fn induced_coim_to_im(b: Backend, f: &Mor) -> Option<Mor> {
    let coim = b.cokernel(&b.kernel(f)?)?;
    let im = b.kernel(&b.cokernel(f)?)?;
    let through_coim = b.descend_through_epi(&coim, f)?;
    b.lift_through_mono(&im, &through_coim)
}

/// Whether `A ↣ B ↠ C` (given as `m`, `e`) is a short exact sequence.
pub fn is_short_exact(b: Backend, m: &Mor, e: &Mor) -> bool {
    m.rows() == e.cols()
        && b.compose(e, m).is_zero()
        && b.is_adm_mono(m)
        && b.is_adm_epi(e)
        && m.cols() + e.rows() == m.rows()
}

/// Classifies `A_k → … → A_0`, given as `maps[0]: A_k → A_{k−1}, …, maps[k−1]: A_1 → A_0`.
pub fn sequence_classify(b: Backend, maps: &[Mor]) -> SequenceClass {
    let k = maps.len();
    for j in 1..k {
        if maps[j].cols() != maps[j - 1].rows() {
            return SequenceClass::NotAcyclic(AcyclicFailure::NotComposable { position: k - j });
        }
    }
    let mut factors = Vec::with_capacity(k);
    for (j, f) in maps.iter().enumerate() {
        match factor_admissible(b, f) {
            Some(ef) => factors.push(ef),
            None => return SequenceClass::NotAcyclic(AcyclicFailure::NotAdmissible { position: k - j }),
        }
    }
    // interior object A_i sits between maps[k−i−1] (into A_i) and maps[k−i] (out of A_i)
    for i in (1..k).rev() {
        let (_, mono_in) = &factors[k - i - 1];
        let (epi_out, _) = &factors[k - i];
        if !is_short_exact(b, mono_in, epi_out) {
            return SequenceClass::NotAcyclic(AcyclicFailure::NotShortExact { position: i });
        }
    }
    let left = maps.first().is_none_or(|f| b.is_adm_mono(f));
    let right = maps.last().is_none_or(|f| b.is_adm_epi(f));
    match (left, right) {
        (true, true) => SequenceClass::Exact,
        (true, false) => SequenceClass::LeftExact,
        (false, true) => SequenceClass::RightExact,
        (false, false) => SequenceClass::Acyclic,
    }
}

/// Searches morphisms between objects of size `≤ size_bound` (entries `≤ entry_bound` for
/// infinite hom-sets) for one with kernel and cokernel whose `coim → im` is not invertible.
pub fn stringency_probe(b: Backend, size_bound: usize, entry_bound: i64, max_homs: usize) -> Result<Option<Mor>> {
    let mut seen = 0usize;
    for src in 0..=size_bound {
        for dst in 0..=size_bound {
            let homs = b.homs_bounded(src, dst, entry_bound);
            seen += homs.len();
            if seen > max_homs {
                return Err(Error::ResourceLimit(format!("stringency probe exceeds {max_homs} morphisms")));
            }
            for f in homs {
                let (Some(_), Some(_)) = (b.kernel(&f), b.cokernel(&f)) else {
                    continue;
                };
                match induced_coim_to_im(b, &f) {
                    Some(phi) if b.is_iso(&phi) => {}
                    _ => return Ok(Some(f)),
                }
            }
        }
    }
    Ok(None)
}

/// Exhaustive universal-property check that `k` is a kernel of `f`, testing all maps from
/// objects of size `≤ size_bound`.
pub fn verify_kernel(b: Backend, f: &Mor, k: &Mor, size_bound: usize, entry_bound: i64) -> bool {
    if !b.compose(f, k).is_zero() {
        return false;
    }
    (0..=size_bound).all(|t| {
        let to_k = b.homs_bounded(t, k.cols(), entry_bound);
        b.homs_bounded(t, f.cols(), entry_bound).iter().filter(|g| b.compose(f, g).is_zero()).all(|g| {
            let bounded = to_k.iter().filter(|h| b.compose(k, h) == *g).count();
            let exact = b.lift_through_mono_any(k, g);
            exact && bounded <= 1 && (bounded == 1 || !b.is_finite())
        })
    })
}

/// Dual of [`verify_kernel`].
pub fn verify_cokernel(b: Backend, f: &Mor, c: &Mor, size_bound: usize, entry_bound: i64) -> bool {
    verify_kernel(b, &f.transpose(), &c.transpose(), size_bound, entry_bound)
}

impl Backend {
    /// Whether `g` factors through `k` at all (no admissibility assumed on `k`).
    fn lift_through_mono_any(self, k: &Mor, g: &Mor) -> bool {
        match self {
            Backend::F1 => self.homs(g.cols(), k.cols()).unwrap().iter().any(|h| self.compose(k, h) == *g),
            _ => super::solve(k, g, self.ring()).is_some(),
        }
    }
}

/// Pullback of the admissible mono `mono: B₀ ↣ A₀` along `along: A₁ → A₀`, returned as
/// `(B₁ ↣ A₁, B₁ → B₀)`.
pub fn pullback_of_mono(b: Backend, mono: &Mor, along: &Mor) -> Option<(Mor, Mor)> {
    let c = b.cokernel(mono)?;
    let top = b.kernel(&b.compose(&c, along))?;
    let left = b.lift_through_mono(mono, &b.compose(along, &top))?;
    Some((top, left))
}

/// Pushout of the admissible epi `epi: A₁ ↠ B₁` along `along: A₁ → A₀`, returned as
/// `(A₀ ↠ B₀, B₁ → B₀)`.
pub fn pushout_of_epi(b: Backend, epi: &Mor, along: &Mor) -> Option<(Mor, Mor)> {
    let (t, l) = pullback_of_mono(b, &epi.transpose(), &along.transpose())?;
    Some((t.transpose(), l.transpose()))
}

/// A commuting square `top: B₁ → A₁`, `left: B₁ → B₀`, `right: A₁ → A₀`, `bottom: B₀ → A₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackSquare {
    pub top: Mor,
    pub left: Mor,
    pub right: Mor,
    pub bottom: Mor,
}

impl PullbackSquare {
    pub fn commutes(&self, b: Backend) -> bool {
        self.top.rows() == self.right.cols()
            && self.left.rows() == self.bottom.cols()
            && b.compose(&self.right, &self.top) == b.compose(&self.bottom, &self.left)
    }

    /// Whether the square is cartesian, given that `bottom` is an admissible mono.
    pub fn is_pullback(&self, b: Backend) -> bool {
        let Some((t, l)) = pullback_of_mono(b, &self.bottom, &self.right) else {
            return false;
        };
        match b.lift_through_mono(&t, &self.top) {
            Some(phi) => b.is_iso(&phi) && b.compose(&l, &phi) == self.left,
            None => false,
        }
    }

    /// Whether the square is cocartesian, given that `left` is an admissible epi.
    pub fn is_pushout(&self, b: Backend) -> bool {
        let Some((r, l)) = pushout_of_epi(b, &self.left, &self.top) else {
            return false;
        };
        // pushout object Q with r: A₁ ↠ Q, l: B₀ → Q; compare to A₀
        match b.descend_through_epi(&r, &self.right) {
            Some(phi) => b.is_iso(&phi) && b.compose(&phi, &l) == self.bottom,
            None => false,
        }
    }
}

/// For a pullback square whose horizontal maps are admissible monos, the induced map
/// `coker(top) → coker(bottom)`, together with whether it is an admissible mono.
pub fn mono_pullback_coker(b: Backend, sq: &PullbackSquare) -> Result<(Mor, bool)> {
    if !sq.commutes(b) {
        return Err(Error::InvalidInput("square does not commute".into()));
    }
    if !b.is_adm_mono(&sq.top) || !b.is_adm_mono(&sq.bottom) {
        return Err(Error::InvalidInput("horizontal maps must be admissible monos".into()));
    }
    if !sq.is_pullback(b) {
        return Err(Error::InvalidInput("square is not a pullback".into()));
    }
    let c1 = b.cokernel(&sq.top).ok_or_else(|| Error::Internal("missing cokernel".into()))?;
    let c0 = b.cokernel(&sq.bottom).ok_or_else(|| Error::Internal("missing cokernel".into()))?;
    let induced = b
        .descend_through_epi(&c1, &b.compose(&c0, &sq.right))
        .ok_or_else(|| Error::Internal("induced cokernel map does not exist".into()))?;
    Ok((induced, b.is_adm_mono(&induced)))
}

/// A 3×3 diagram: `h[r]` are the two maps of row `r` (top, middle, bottom) and `v[c]` the two
/// maps of column `c` (left, middle, right).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NineDiagram {
    pub h: [[Mor; 2]; 3],
    pub v: [[Mor; 2]; 3],
}

impl NineDiagram {
    pub fn zero() -> NineDiagram {
        let z = Mor::zero(0, 0);
        NineDiagram { h: [[z; 2]; 3], v: [[z; 2]; 3] }
    }
}

/// Checks the hypotheses (commuting squares, exact rows, exact middle and right columns) and
/// returns whether the left column is short exact.
pub fn nine_lemma_check(b: Backend, d: &NineDiagram) -> Result<bool> {
    let bad = |what: String| Err(Error::InvalidInput(what));
    for r in 0..3 {
        for c in 0..3 {
            // object at (r, c): size seen from the horizontal and vertical maps
            let hs = if c < 2 { d.h[r][c].cols() } else { d.h[r][1].rows() };
            let vs = if r < 2 { d.v[c][r].cols() } else { d.v[c][1].rows() };
            if hs != vs {
                return bad(format!("object ({r},{c}) has inconsistent sizes {hs} and {vs}"));
            }
        }
    }
    for r in 0..2 {
        for c in 0..2 {
            let right_down = b.compose(&d.v[c + 1][r], &d.h[r][c]);
            let down_right = b.compose(&d.h[r + 1][c], &d.v[c][r]);
            if right_down != down_right {
                return bad(format!("square at ({r},{c}) does not commute"));
            }
        }
    }
    for r in 0..3 {
        if !is_short_exact(b, &d.h[r][0], &d.h[r][1]) {
            return bad(format!("row {r} is not short exact"));
        }
    }
    for c in 1..3 {
        if !is_short_exact(b, &d.v[c][0], &d.v[c][1]) {
            return bad(format!("column {c} is not short exact"));
        }
    }
    Ok(is_short_exact(b, &d.v[0][0], &d.v[0][1]))
}

/// A random admissible mono into an object of size `dst`, from a random smaller size.
fn random_adm_mono<R: Rng>(b: Backend, rng: &mut R, dst: usize) -> Option<Mor> {
    let src = rng.gen_range(0..=dst);
    let monos: Vec<Mor> = b.homs_bounded(src, dst, 1).into_iter().filter(|m| b.is_adm_mono(m)).collect();
    monos.choose(rng).copied()
}

/// A random 3×3 diagram satisfying the nine-lemma hypotheses: `B` of size `≤ max_size` with
/// two random admissible subobjects `B' ↣ B` and `W ↣ B`, the right column induced on
/// quotients, and the left column recomputed as kernels. `None` when a required map is not
/// admissible (possible only outside stringent backends).
pub fn nine_from_subobjects<R: Rng>(b: Backend, rng: &mut R, max_size: usize) -> Option<NineDiagram> {
    let n = rng.gen_range(0..=max_size);
    let u = random_adm_mono(b, rng, n)?;
    let w = random_adm_mono(b, rng, n)?;
    let to_b2 = b.cokernel(&u)?; // B ↠ B''
    let to_c = b.cokernel(&w)?; // B ↠ C
    let (to_c1, c1_in_c) = factor_admissible(b, &b.compose(&to_c, &u))?; // B' ↠ C' ↣ C
    let c_to_c2 = b.cokernel(&c1_in_c)?; // C ↠ C''
    let b2_to_c2 = b.descend_through_epi(&to_b2, &b.compose(&c_to_c2, &to_c))?;
    let a1 = b.kernel(&to_c1)?; // A' ↣ B'
    let a = b.kernel(&to_c)?; // A ↣ B
    let a2 = b.kernel(&b2_to_c2)?; // A'' ↣ B''
    let a1_to_a = b.lift_through_mono(&a, &b.compose(&u, &a1))?;
    let a_to_a2 = b.lift_through_mono(&a2, &b.compose(&to_b2, &a))?;
    Some(NineDiagram {
        h: [[a1, to_c1], [a, to_c], [a2, b2_to_c2]],
        v: [[a1_to_a, a_to_a2], [u, to_b2], [c1_in_c, c_to_c2]],
    })
}

/// A random pullback square with admissible horizontal monos: `bottom: B₀ ↣ A₀` and an
/// admissible `right: A₁ → A₀`, completed by the pullback.
pub fn random_pullback_square<R: Rng>(b: Backend, rng: &mut R, max_size: usize) -> Option<PullbackSquare> {
    let a0 = rng.gen_range(0..=max_size);
    let a1 = rng.gen_range(0..=max_size);
    let bottom = random_adm_mono(b, rng, a0)?;
    let admissible: Vec<Mor> =
        b.homs_bounded(a1, a0, 1).into_iter().filter(|f| factor_admissible(b, f).is_some()).collect();
    let right = *admissible.choose(rng)?;
    let (top, left) = pullback_of_mono(b, &bottom, &right)?;
    Some(PullbackSquare { top, left, right, bottom })
}

/// The snake sequence `ker f → ker gf → ker g → coker f → coker gf → coker g` of composable
/// `f: A → B`, `g: B → C`, as a chain for [`sequence_classify`].
pub fn snake_sequence(b: Backend, f: &Mor, g: &Mor) -> Option<Vec<Mor>> {
    let gf = b.compose(g, f);
    let (kf, kgf, kg) = (b.kernel(f)?, b.kernel(&gf)?, b.kernel(g)?);
    let (cf, cgf, cg) = (b.cokernel(f)?, b.cokernel(&gf)?, b.cokernel(g)?);
    Some(vec![
        b.lift_through_mono(&kgf, &kf)?,
        b.lift_through_mono(&kg, &b.compose(f, &kgf))?,
        b.compose(&cf, &kg),
        b.descend_through_epi(&cf, &b.compose(&cgf, g))?,
        b.descend_through_epi(&cgf, &cg)?,
    ])
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AxiomReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
}

/// Exhaustive check, over objects of size `≤ size_bound`, of: isos and zero maps are
/// admissible in the expected way; admissible monos and epis compose; the pullback of an
/// admissible epi along an admissible mono is an admissible epi (and dually); such squares
/// are cartesian exactly when cocartesian.
pub fn check_proto_exact_axioms(b: Backend, size_bound: usize, entry_bound: i64) -> AxiomReport {
    let mut rep = AxiomReport::default();
    let homs = |s: usize, t: usize| b.homs_bounded(s, t, entry_bound);
    let sizes = 0..=size_bound;
    for n in sizes.clone() {
        rep.check(b.is_adm_mono(&b.zero(0, n)) && b.is_adm_epi(&b.zero(n, 0)), || format!("zero maps at {n}"));
        for f in homs(n, n) {
            if b.is_iso(&f) {
                rep.check(b.is_adm_mono(&f) && b.is_adm_epi(&f), || format!("iso {f:?}"));
            }
        }
    }
    for x in sizes.clone() {
        for y in sizes.clone() {
            let monos_xy: Vec<Mor> = homs(x, y).into_iter().filter(|m| b.is_adm_mono(m)).collect();
            let epis_xy: Vec<Mor> = homs(x, y).into_iter().filter(|m| b.is_adm_epi(m)).collect();
            for z in sizes.clone() {
                for g in homs(y, z) {
                    if b.is_adm_mono(&g) {
                        for f in &monos_xy {
                            rep.check(b.is_adm_mono(&b.compose(&g, f)), || format!("mono {g:?}∘{f:?}"));
                        }
                    }
                    if b.is_adm_epi(&g) {
                        for f in &epis_xy {
                            rep.check(b.is_adm_epi(&b.compose(&g, f)), || format!("epi {g:?}∘{f:?}"));
                        }
                    }
                }
            }
        }
    }
    // epi q: B ↠ D pulled back along mono j: C ↣ D
    for d in sizes.clone() {
        for bsz in sizes.clone() {
            let epis: Vec<Mor> = homs(bsz, d).into_iter().filter(|m| b.is_adm_epi(m)).collect();
            for c in sizes.clone() {
                let monos: Vec<Mor> = homs(c, d).into_iter().filter(|m| b.is_adm_mono(m)).collect();
                for q in &epis {
                    for j in &monos {
                        match pullback_of_mono(b, j, q) {
                            Some((top, left)) => {
                                let sq = PullbackSquare { top, left, right: *q, bottom: *j };
                                rep.check(b.is_adm_epi(&left) && b.is_adm_mono(&top), || {
                                    format!("pullback of {q:?} along {j:?}")
                                });
                                rep.check(sq.is_pushout(b), || {
                                    format!("pullback of {q:?} along {j:?} not cocartesian")
                                });
                            }
                            None => rep.check(false, || format!("no pullback of {q:?} along {j:?}")),
                        }
                        // dual: pushout of the mono j^T-shaped data; use transposes
                        let (qt, jt) = (q.transpose(), j.transpose());
                        match pushout_of_epi(b, &jt, &qt) {
                            Some((r, l)) => {
                                rep.check(b.is_adm_mono(&l) && b.is_adm_epi(&r), || {
                                    format!("pushout of {qt:?} along {jt:?}")
                                });
                                let sq = PullbackSquare { top: qt, left: jt, right: r, bottom: l };
                                rep.check(
                                    b.is_adm_mono(&sq.top) && b.is_adm_mono(&sq.bottom) && sq.is_pullback(b),
                                    || format!("pushout of {qt:?} along {jt:?} not cartesian"),
                                );
                            }
                            None => rep.check(false, || format!("no pushout of {qt:?} along {jt:?}")),
                        }
                    }
                }
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(cols: usize, rows: &[&[i64]]) -> Mor {
        Mor::from_rows(cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn factorizations() {
        for b in [Backend::F1, Backend::Fq(2), Backend::FreeAb] {
            let (e, mo) = factor_admissible(b, &Mor::identity(2)).unwrap();
            assert!(b.is_iso(&e) && b.is_iso(&mo));
        }
        assert!(factor_admissible(Backend::FreeAb, &m(1, &[&[2]])).is_none());
        // {*,a,b} → {*,c}: a ↦ c, b ↦ *
        let (e, mo) = factor_admissible(Backend::F1, &m(2, &[&[1, 0]])).unwrap();
        assert_eq!(e, m(2, &[&[1, 0]]));
        assert_eq!(mo, Mor::identity(1));
    }

    #[test]
    fn classification_examples() {
        let f1 = Backend::F1;
        // {*,a} ↣ {*,a,b} ↠ {*,b}
        let seq = [m(1, &[&[1], &[0]]), m(2, &[&[0, 1]])];
        assert_eq!(sequence_classify(f1, &seq), SequenceClass::Exact);
        let seq = [Mor::zero(1, 0), Mor::identity(1)];
        assert_eq!(sequence_classify(f1, &seq), SequenceClass::Exact);
        let seq = [m(1, &[&[2]]), Mor::zero(0, 1)];
        assert_eq!(
            sequence_classify(Backend::FreeAb, &seq),
            SequenceClass::NotAcyclic(AcyclicFailure::NotAdmissible { position: 2 })
        );
        // 0 → A → A → 0 is not exact at the middle when the map is zero
        let seq = [Mor::zero(1, 0), Mor::zero(1, 1), Mor::zero(0, 1)];
        assert!(!sequence_classify(Backend::Fq(2), &seq).is_acyclic());
    }

    #[test]
    fn stringency() {
        assert_eq!(stringency_probe(Backend::F1, 3, 0, 1 << 20).unwrap(), None);
        assert_eq!(stringency_probe(Backend::Fq(2), 2, 0, 1 << 20).unwrap(), None);
        assert_eq!(stringency_probe(Backend::FreeAb, 1, 2, 1 << 20).unwrap(), Some(m(1, &[&[2]])));
    }

    #[test]
    fn kernel_universal_properties() {
        let f = m(2, &[&[1, 0]]);
        let b = Backend::F1;
        assert!(verify_kernel(b, &f, &b.kernel(&f).unwrap(), 3, 0));
        assert!(verify_cokernel(b, &f, &b.cokernel(&f).unwrap(), 3, 0));
        assert!(!verify_kernel(b, &f, &Mor::zero(2, 0), 3, 0));
        let two = m(1, &[&[2]]);
        let z = Backend::FreeAb;
        assert!(verify_kernel(z, &two, &z.kernel(&two).unwrap(), 2, 2));
        assert!(verify_cokernel(z, &two, &z.cokernel(&two).unwrap(), 2, 2));
    }

    #[test]
    fn mono_pullback_examples() {
        let b = Backend::F1;
        let sq = PullbackSquare {
            top: Mor::zero(1, 0),
            left: Mor::zero(1, 0),
            right: m(1, &[&[1], &[0]]),
            bottom: m(1, &[&[0], &[1]]),
        };
        let (c, ok) = mono_pullback_coker(b, &sq).unwrap();
        assert!(ok);
        assert_eq!(c, Mor::identity(1));
        let id = Mor::identity(2);
        let sq =
            PullbackSquare { top: m(1, &[&[1], &[0]]), left: Mor::identity(1), right: id, bottom: m(1, &[&[1], &[0]]) };
        assert_eq!(mono_pullback_coker(b, &sq).unwrap(), (Mor::identity(1), true));
        // enlarging B₁ breaks the pullback property
        let sq = PullbackSquare {
            top: Mor::identity(1),
            left: Mor::zero(1, 1),
            right: m(1, &[&[1], &[0]]),
            bottom: m(1, &[&[0], &[1]]),
        };
        assert!(mono_pullback_coker(b, &sq).is_err());
    }

    #[test]
    fn nine_lemma_examples() {
        assert!(nine_lemma_check(Backend::F1, &NineDiagram::zero()).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for b in [Backend::F1, Backend::Fq(2)] {
            let mut done = 0;
            while done < 30 {
                if let Some(d) = nine_from_subobjects(b, &mut rng, 3) {
                    assert!(nine_lemma_check(b, &d).unwrap(), "{b}: {d:?}");
                    done += 1;
                }
            }
        }
    }

    #[test]
    fn axioms_small() {
        for (b, n, e) in [(Backend::F1, 2, 0), (Backend::Fq(2), 2, 0), (Backend::FreeAb, 1, 1)] {
            let rep = check_proto_exact_axioms(b, n, e);
            assert!(rep.holds(), "{b}: {:?}", rep.failures);
            assert!(rep.checked > 10);
        }
    }

    #[test]
    fn snake_in_f1_and_f2() {
        for b in [Backend::F1, Backend::Fq(2)] {
            for f in b.homs(2, 2).unwrap() {
                for g in b.homs(2, 1).unwrap() {
                    let s = snake_sequence(b, &f, &g).unwrap();
                    assert_eq!(sequence_classify(b, &s), SequenceClass::Exact, "{b} {f:?} {g:?}");
                }
            }
        }
    }
}
