use super::{check_level, Distribution, FloatSampler};
use crate::error::{Error, Result};
use crate::scalar::{ExtendedReal, Rational, Scalar};

/// Piecewise distribution over exact rationals.
pub type ExactDistribution = PiecewiseDistribution<Rational>;

/// A linear CDF rise of `rise` spread uniformly over `(left, right]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment<S> {
    pub left: S,
    pub right: S,
    pub rise: S,
}

#[derive(Clone, Debug, PartialEq)]
enum PieceKind {
    Atom,
    Linear,
}

/// A scan-order piece: an atom (`start == end`) or a linear run, with the
/// CDF value just before it.
#[derive(Clone, Debug, PartialEq)]
struct Piece<S> {
    kind: PieceKind,
    start: S,
    end: S,
    mass: S,
    cum_before: S,
}

impl<S: Scalar> Piece<S> {
    fn cum_after(&self) -> S {
        self.cum_before.clone() + self.mass.clone()
    }

    /// Mass of this piece in `(-inf, x]`, assuming `start <= x`.
    fn mass_up_to(&self, x: &S) -> S {
        match self.kind {
            PieceKind::Atom => self.mass.clone(),
            PieceKind::Linear => {
                if *x >= self.end {
                    self.mass.clone()
                } else {
                    self.mass.clone() * (x.clone() - self.start.clone())
                        / (self.end.clone() - self.start.clone())
                }
            }
        }
    }
}

/// Distribution made of point masses and linear CDF segments.
///
/// Atoms may sit on segment endpoints or inside segments; segment interiors
/// must not overlap. Total mass is one.
#[derive(Clone, Debug)]
pub struct PiecewiseDistribution<S> {
    atoms: Vec<(S, S)>,
    segments: Vec<Segment<S>>,
    pieces: Vec<Piece<S>>,
}

impl<S: Scalar> PartialEq for PiecewiseDistribution<S> {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms && self.segments == other.segments
    }
}

impl<S: Scalar> PiecewiseDistribution<S> {
    /// Builds from `(location, mass)` atoms and `(left, right, rise)` segments.
    pub fn new(atoms: Vec<(S, S)>, segments: Vec<(S, S, S)>) -> Result<Self> {
        let segments = segments
            .into_iter()
            .map(|(left, right, rise)| Segment { left, right, rise })
            .collect();
        Self::from_parts(atoms, segments)
    }

    pub fn from_parts(mut atoms: Vec<(S, S)>, mut segments: Vec<Segment<S>>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidDistribution(msg));
        for (loc, mass) in &atoms {
            if !finite(loc) || !finite(mass) {
                return invalid(format!("non-finite atom ({loc}, {mass})"));
            }
            if *mass <= S::zero() {
                return invalid(format!("atom at {loc} has non-positive mass {mass}"));
            }
        }
        for seg in &segments {
            if !finite(&seg.left) || !finite(&seg.right) || !finite(&seg.rise) {
                return invalid(format!("non-finite segment [{}, {}]", seg.left, seg.right));
            }
            if seg.left >= seg.right {
                return invalid(format!("segment [{}, {}] is empty", seg.left, seg.right));
            }
            if seg.rise <= S::zero() {
                return invalid(format!(
                    "segment [{}, {}] has non-positive rise",
                    seg.left, seg.right
                ));
            }
        }
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        if let Some(w) = atoms.windows(2).find(|w| w[0].0 == w[1].0) {
            return invalid(format!("duplicate atom location {}", w[0].0));
        }
        segments.sort_by(|a, b| a.left.partial_cmp(&b.left).expect("finite"));
        if let Some(w) = segments.windows(2).find(|w| w[0].right > w[1].left) {
            return invalid(format!(
                "segments [{}, {}] and [{}, {}] overlap",
                w[0].left, w[0].right, w[1].left, w[1].right
            ));
        }
        if atoms.is_empty() && segments.is_empty() {
            return invalid("no mass".into());
        }
        let total = atoms
            .iter()
            .map(|a| a.1.clone())
            .chain(segments.iter().map(|s| s.rise.clone()))
            .fold(S::zero(), |acc, m| acc + m);
        if !total.level_eq(&S::one()) {
            return invalid(format!("total mass {total} is not 1"));
        }
        let pieces = build_pieces(&atoms, &segments);
        Ok(PiecewiseDistribution {
            atoms,
            segments,
            pieces,
        })
    }

    /// Unit mass at `x`.
    pub fn point_mass(x: S) -> Self {
        Self::new(vec![(x, S::one())], vec![]).expect("valid point mass")
    }

    /// Uniform on `[a, b]`.
    pub fn uniform(a: S, b: S) -> Result<Self> {
        Self::new(vec![], vec![(a, b, S::one())])
    }

    /// Equal mass on each listed value; repeated values accumulate.
    pub fn empirical(values: &[S]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDistribution("empty sample".into()));
        }
        let w = S::one() / S::from_i64(values.len() as i64);
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let mut atoms: Vec<(S, S)> = Vec::new();
        for v in sorted {
            match atoms.last_mut() {
                Some(last) if last.0 == v => last.1 = last.1.clone() + w.clone(),
                _ => atoms.push((v, w.clone())),
            }
        }
        Self::new(atoms, vec![])
    }

    pub fn atoms(&self) -> &[(S, S)] {
        &self.atoms
    }

    pub fn segments(&self) -> &[Segment<S>] {
        &self.segments
    }

    /// Every location where the CDF changes slope or jumps.
    pub fn breakpoints(&self) -> Vec<S> {
        let mut pts: Vec<S> = Vec::new();
        for pc in &self.pieces {
            pts.push(pc.start.clone());
            pts.push(pc.end.clone());
        }
        sort_dedup(&mut pts);
        pts
    }

    /// Mass of the atom at `x`, zero if none.
    pub fn atom_mass(&self, x: &S) -> S {
        self.atoms
            .binary_search_by(|a| a.0.partial_cmp(x).expect("finite"))
            .map(|i| self.atoms[i].1.clone())
            .unwrap_or_else(|_| S::zero())
    }

    /// Converts every number with `f`, keeping the geometry.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PiecewiseDistribution<T> {
        let atoms: Vec<(T, T)> = self.atoms.iter().map(|(l, m)| (f(l), f(m))).collect();
        let segments: Vec<Segment<T>> = self
            .segments
            .iter()
            .map(|s| Segment {
                left: f(&s.left),
                right: f(&s.right),
                rise: f(&s.rise),
            })
            .collect();
        let pieces = build_pieces(&atoms, &segments);
        PiecewiseDistribution {
            atoms,
            segments,
            pieces,
        }
    }

    pub fn to_f64(&self) -> PiecewiseDistribution<f64> {
        self.map(|v| v.to_f64())
    }

    /// The distribution with CDF `sum_i w_i F_i`. Coincident atoms merge into one
    /// atom; overlapping segments are cut at every endpoint and their rises summed.
    pub fn weighted_sum(parts: &[(S, &Self)]) -> Result<Self> {
        let mut atoms: Vec<(S, S)> = Vec::new();
        let mut linear: Vec<Segment<S>> = Vec::new();
        for (w, d) in parts {
            if *w <= S::zero() {
                continue;
            }
            for pc in &d.pieces {
                let mass = w.clone() * pc.mass.clone();
                match pc.kind {
                    PieceKind::Atom => atoms.push((pc.start.clone(), mass)),
                    PieceKind::Linear => linear.push(Segment {
                        left: pc.start.clone(),
                        right: pc.end.clone(),
                        rise: mass,
                    }),
                }
            }
        }
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        let mut merged_atoms: Vec<(S, S)> = Vec::new();
        for (loc, m) in atoms {
            match merged_atoms.last_mut() {
                Some(last) if last.0 == loc => last.1 = last.1.clone() + m,
                _ => merged_atoms.push((loc, m)),
            }
        }

        let mut cuts: Vec<S> = Vec::new();
        for s in &linear {
            cuts.push(s.left.clone());
            cuts.push(s.right.clone());
        }
        sort_dedup(&mut cuts);
        let mut merged_segments: Vec<Segment<S>> = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let rise = linear
                .iter()
                .filter(|s| s.left <= *a && s.right >= *b)
                .map(|s| {
                    s.rise.clone() * (b.clone() - a.clone()) / (s.right.clone() - s.left.clone())
                })
                .fold(S::zero(), |acc, m| acc + m);
            if rise > S::zero() {
                merged_segments.push(Segment {
                    left: a.clone(),
                    right: b.clone(),
                    rise,
                });
            }
        }
        Self::from_parts(merged_atoms, merged_segments)
    }
}

fn finite<S: Scalar>(v: &S) -> bool {
    v.to_f64().is_finite() || S::EXACT
}

fn sort_dedup<S: Scalar>(v: &mut Vec<S>) {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    v.dedup_by(|a, b| a == b);
}

/// Scan order: segments split at interior atoms, then sorted by start with an
/// atom before a segment that starts at the same point.
fn build_pieces<S: Scalar>(atoms: &[(S, S)], segments: &[Segment<S>]) -> Vec<Piece<S>> {
    let mut pieces: Vec<Piece<S>> = atoms
        .iter()
        .map(|(loc, m)| Piece {
            kind: PieceKind::Atom,
            start: loc.clone(),
            end: loc.clone(),
            mass: m.clone(),
            cum_before: S::zero(),
        })
        .collect();
    for seg in segments {
        let mut cuts: Vec<S> = vec![seg.left.clone()];
        cuts.extend(
            atoms
                .iter()
                .filter(|(loc, _)| *loc > seg.left && *loc < seg.right)
                .map(|(loc, _)| loc.clone()),
        );
        cuts.push(seg.right.clone());
        let width = seg.right.clone() - seg.left.clone();
        for w in cuts.windows(2) {
            let share = seg.rise.clone() * (w[1].clone() - w[0].clone()) / width.clone();
            pieces.push(Piece {
                kind: PieceKind::Linear,
                start: w[0].clone(),
                end: w[1].clone(),
                mass: share,
                cum_before: S::zero(),
            });
        }
    }
    pieces.sort_by(|a, b| {
        a.start
            .partial_cmp(&b.start)
            .expect("finite")
            .then_with(|| {
                let rank = |k: &PieceKind| matches!(k, PieceKind::Linear) as u8;
                rank(&a.kind).cmp(&rank(&b.kind))
            })
    });
    let mut cum = S::zero();
    for pc in &mut pieces {
        pc.cum_before = cum.clone();
        cum = cum + pc.mass.clone();
    }
    pieces
}

impl<S: Scalar> Distribution for PiecewiseDistribution<S> {
    type Scalar = S;

    fn cdf(&self, x: &S) -> S {
        let k = self.pieces.partition_point(|pc| pc.start <= *x);
        if k == 0 {
            return S::zero();
        }
        let last = &self.pieces[k - 1];
        S::min_of(last.cum_before.clone() + last.mass_up_to(x), S::one())
    }

    fn cdf_left_limit(&self, x: &S) -> S {
        let k = self.pieces.partition_point(|pc| pc.start < *x);
        if k == 0 {
            return S::zero();
        }
        let last = &self.pieces[k - 1];
        S::min_of(last.cum_before.clone() + last.mass_up_to(x), S::one())
    }

    fn quantile(&self, p: &S) -> Result<ExtendedReal<S>> {
        check_level(p)?;
        if *p == S::zero() {
            return Ok(ExtendedReal::NegInf);
        }
        let k = self.pieces.partition_point(|pc| pc.cum_after() < *p);
        let Some(pc) = self.pieces.get(k) else {
            // only reachable through floating-point round-off at p = 1
            return Ok(ExtendedReal::Finite(
                self.pieces.last().expect("non-empty").end.clone(),
            ));
        };
        Ok(ExtendedReal::Finite(match pc.kind {
            PieceKind::Atom => pc.start.clone(),
            PieceKind::Linear => {
                let frac = (p.clone() - pc.cum_before.clone()) / pc.mass.clone();
                let frac = S::max_of(S::min_of(frac, S::one()), S::zero());
                pc.start.clone() + frac * (pc.end.clone() - pc.start.clone())
            }
        }))
    }

    fn is_continuous_at(&self, x: &S) -> bool {
        self.atom_mass(x) == S::zero()
    }

    fn flat_left_witness(&self, x: &S) -> Option<S> {
        let k = self.pieces.partition_point(|pc| pc.start < *x);
        if k == 0 {
            return Some(x.clone() - S::one());
        }
        let last = &self.pieces[k - 1];
        match last.kind {
            PieceKind::Atom => Some(last.start.clone()),
            PieceKind::Linear if last.end < *x => Some(last.end.clone()),
            PieceKind::Linear => None,
        }
    }

    fn support_bounds(&self) -> (ExtendedReal<S>, ExtendedReal<S>) {
        let first = self.pieces.first().expect("non-empty");
        let last = self.pieces.last().expect("non-empty");
        (
            ExtendedReal::Finite(first.start.clone()),
            ExtendedReal::Finite(last.end.clone()),
        )
    }

    fn quantile_kinks(&self) -> Option<Vec<S>> {
        let mut levels: Vec<S> = self.pieces.iter().map(|pc| pc.cum_before.clone()).collect();
        levels.push(S::one());
        sort_dedup(&mut levels);
        Some(levels)
    }

    fn float_sampler(&self) -> Result<FloatSampler> {
        Ok(FloatSampler::Pieces(self.to_f64()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn r(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    fn fin(v: Rational) -> ExtendedReal<Rational> {
        ExtendedReal::Finite(v)
    }

    #[test]
    fn point_mass_queries() {
        let d = ExactDistribution::point_mass(r(0, 1));
        assert_eq!(d.cdf(&r(-1, 1)), r(0, 1));
        assert_eq!(d.cdf(&r(0, 1)), r(1, 1));
        assert_eq!(d.cdf_left_limit(&r(0, 1)), r(0, 1));
        assert!(!d.is_continuous_at(&r(0, 1)));
        assert_eq!(d.flat_left_of(&r(0, 1)), (true, Some(r(-1, 1))));
        assert_eq!(d.quantile(&r(7, 10)).unwrap(), fin(r(0, 1)));
        let d3 = ExactDistribution::point_mass(r(3, 1));
        assert_eq!(d3.quantile(&r(7, 10)).unwrap(), fin(r(3, 1)));
        assert_eq!(d3.support_bounds(), (fin(r(3, 1)), fin(r(3, 1))));
    }

    #[test]
    fn uniform_queries() {
        let u = ExactDistribution::uniform(r(0, 1), r(1, 1)).unwrap();
        assert_eq!(u.cdf(&r(3, 10)), r(3, 10));
        assert_eq!(u.cdf_left_limit(&r(3, 10)), r(3, 10));
        assert_eq!(u.quantile(&r(1, 2)).unwrap(), fin(r(1, 2)));
        assert!(u.is_continuous_at(&r(1, 2)));
        assert!(u.is_continuous_at(&r(2, 1)));
        assert_eq!(u.flat_left_of(&r(1, 2)), (false, None));
        assert_eq!(u.support_bounds(), (fin(r(0, 1)), fin(r(1, 1))));
        assert_eq!(u.quantile(&r(1, 1)).unwrap(), fin(r(1, 1)));
        let u12 = ExactDistribution::uniform(r(1, 1), r(2, 1)).unwrap();
        assert_eq!(u12.flat_left_of(&r(1, 1)), (true, Some(r(0, 1))));
    }

    #[test]
    fn empirical_steps() {
        let e = ExactDistribution::empirical(&[r(1, 1), r(2, 1), r(3, 1)]).unwrap();
        assert_eq!(e.cdf_left_limit(&r(2, 1)), r(1, 3));
        assert_eq!(e.quantile(&r(2, 3)).unwrap(), fin(r(2, 1)));
        assert_eq!(e.quantile(&(r(2, 3) + r(1, 1000))).unwrap(), fin(r(3, 1)));
        assert_eq!(e.flat_left_of(&r(5, 2)), (true, Some(r(2, 1))));
    }

    #[test]
    fn quantile_edges() {
        let u = ExactDistribution::uniform(r(0, 1), r(1, 1)).unwrap();
        assert_eq!(u.quantile(&r(0, 1)).unwrap(), ExtendedReal::NegInf);
        assert!(u.quantile(&r(3, 2)).is_err());
        assert!(u.quantile(&r(-1, 10)).is_err());
    }

    #[test]
    fn atom_inside_segment() {
        // half on U(0,2), half at 1
        let d = ExactDistribution::new(vec![(r(1, 1), r(1, 2))], vec![(r(0, 1), r(2, 1), r(1, 2))])
            .unwrap();
        assert_eq!(d.cdf(&r(1, 2)), r(1, 8));
        assert_eq!(d.cdf_left_limit(&r(1, 1)), r(1, 4));
        assert_eq!(d.cdf(&r(1, 1)), r(3, 4));
        assert_eq!(d.cdf(&r(3, 2)), r(7, 8));
        assert_eq!(d.quantile(&r(1, 2)).unwrap(), fin(r(1, 1)));
        assert_eq!(d.quantile(&r(7, 8)).unwrap(), fin(r(3, 2)));
        assert_eq!(d.flat_left_of(&r(1, 1)), (false, None));
    }

    #[test]
    fn construction_errors() {
        assert!(ExactDistribution::new(vec![(r(0, 1), r(1, 2))], vec![]).is_err());
        assert!(
            ExactDistribution::new(vec![(r(0, 1), r(-1, 2)), (r(1, 1), r(3, 2))], vec![]).is_err()
        );
        assert!(ExactDistribution::new(vec![], vec![(r(1, 1), r(1, 1), r(1, 1))]).is_err());
        assert!(ExactDistribution::new(
            vec![],
            vec![(r(0, 1), r(2, 1), r(1, 2)), (r(1, 1), r(3, 1), r(1, 2))]
        )
        .is_err());
        assert!(
            ExactDistribution::new(vec![(r(0, 1), r(1, 2)), (r(0, 1), r(1, 2))], vec![]).is_err()
        );
        assert!(ExactDistribution::new(vec![], vec![]).is_err());
        // touching segments and an atom at a shared endpoint are fine
        assert!(ExactDistribution::new(
            vec![(r(1, 1), r(1, 4))],
            vec![(r(0, 1), r(1, 1), r(1, 4)), (r(1, 1), r(2, 1), r(1, 2))]
        )
        .is_ok());
    }

    #[test]
    fn weighted_sum_splits_overlaps() {
        let a = ExactDistribution::uniform(r(0, 1), r(2, 1)).unwrap();
        let b = ExactDistribution::new(vec![(r(1, 1), r(1, 2))], vec![(r(1, 1), r(3, 1), r(1, 2))])
            .unwrap();
        let m = ExactDistribution::weighted_sum(&[(r(1, 2), &a), (r(1, 2), &b)]).unwrap();
        for x in [
            r(-1, 1),
            r(1, 2),
            r(1, 1),
            r(3, 2),
            r(2, 1),
            r(5, 2),
            r(3, 1),
        ] {
            assert_eq!(
                m.cdf(&x),
                r(1, 2) * a.cdf(&x) + r(1, 2) * b.cdf(&x),
                "x = {x}"
            );
            assert_eq!(
                m.cdf_left_limit(&x),
                r(1, 2) * a.cdf_left_limit(&x) + r(1, 2) * b.cdf_left_limit(&x)
            );
        }
        assert_eq!(m.segments().len(), 3);
    }

    #[test]
    fn kinks_cover_piece_levels() {
        let e = ExactDistribution::empirical(&[r(1, 1), r(2, 1), r(3, 1)]).unwrap();
        assert_eq!(
            e.quantile_kinks().unwrap(),
            vec![r(0, 1), r(1, 3), r(2, 3), r(1, 1)]
        );
    }

    #[test]
    fn float_view_matches() {
        let d = ExactDistribution::new(vec![(r(1, 1), r(1, 3))], vec![(r(0, 1), r(2, 1), r(2, 3))])
            .unwrap();
        let f = d.to_f64();
        for x in [-0.5, 0.25, 1.0, 1.5, 2.5] {
            let exact = d.cdf(&crate::scalar::parse_rational(&x.to_string()).unwrap());
            assert!((f.cdf(&x) - exact.to_f64()).abs() < 1e-15);
        }
    }
}
