use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::{Distribution, ExactDistribution};
use crate::mixture::MixtureSpec;
use crate::scalar::{ratio, Rational};

/// Lattice points `0..=LATTICE_MAX` carry every atom and segment endpoint.
const LATTICE_MAX: i64 = 5;

/// Settings for random piecewise mixture instances.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceGenConfig {
    pub seed: u64,
    pub max_atoms: usize,
    pub max_segments: usize,
    pub q_grid: Vec<Rational>,
    pub p_grid: Vec<Rational>,
    /// Put both components on the same lattice. When `false`, `Y` lives on
    /// the half-shifted lattice so no breakpoint is shared.
    pub allow_coincident_breakpoints: bool,
}

impl Default for InstanceGenConfig {
    fn default() -> Self {
        let q_grid = [(1, 5), (1, 4), (1, 3), (1, 2), (2, 3), (3, 4), (4, 5)];
        let p_grid = [
            (1, 10),
            (1, 5),
            (1, 4),
            (3, 10),
            (1, 3),
            (2, 5),
            (1, 2),
            (3, 5),
            (2, 3),
            (7, 10),
            (3, 4),
            (4, 5),
            (9, 10),
        ];
        InstanceGenConfig {
            seed: 0x5eed,
            max_atoms: 3,
            max_segments: 3,
            q_grid: q_grid.iter().map(|&(n, d)| ratio(n, d)).collect(),
            p_grid: p_grid.iter().map(|&(n, d)| ratio(n, d)).collect(),
            allow_coincident_breakpoints: true,
        }
    }
}

impl InstanceGenConfig {
    pub fn with_seed(seed: u64) -> Self {
        InstanceGenConfig {
            seed,
            ..Self::default()
        }
    }
}

/// Independent stream for instance `index`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Deterministic instance `(m, p)` for `(cfg.seed, index)`.
///
/// Draws favour shared atom locations, plateaus that end at an atom, and
/// levels `p` equal to a value of `F_S` or `F_S(x-)` at a breakpoint, so that
/// every cell of the case table shows up.
pub fn generate_instance(
    cfg: &InstanceGenConfig,
    index: u64,
) -> (MixtureSpec<ExactDistribution>, Rational) {
    let mut rng = instance_rng(cfg.seed, index);
    let x = random_distribution(&mut rng, cfg, ratio(0, 1));
    let y_shift = if cfg.allow_coincident_breakpoints {
        ratio(0, 1)
    } else {
        ratio(1, 2)
    };
    let y = if cfg.allow_coincident_breakpoints && rng.random_bool(0.1) {
        x.clone()
    } else {
        random_distribution(&mut rng, cfg, y_shift)
    };
    let q = cfg
        .q_grid
        .choose(&mut rng)
        .cloned()
        .unwrap_or_else(|| ratio(1, 2));
    let m = MixtureSpec::new(q, x, y).expect("q drawn from (0, 1)");
    let p = pick_level(&mut rng, cfg, &m);
    (m, p)
}

fn pick_level(
    rng: &mut ChaCha8Rng,
    cfg: &InstanceGenConfig,
    m: &MixtureSpec<ExactDistribution>,
) -> Rational {
    let zero = ratio(0, 1);
    let one = ratio(1, 1);
    if rng.random_bool(0.6) {
        let merged = m.merged().expect("valid mixture");
        let mut levels: Vec<Rational> = Vec::new();
        for b in merged.breakpoints() {
            levels.push(merged.cdf(&b));
            levels.push(merged.cdf_left_limit(&b));
        }
        levels.retain(|l| *l > zero && *l < one);
        levels.sort();
        levels.dedup();
        if let Some(l) = levels.choose(rng) {
            if rng.random_bool(0.75) {
                return l.clone();
            }
            // just above a breakpoint level
            let nudge = ratio(1, 97);
            let up = l.clone() + nudge;
            if up < one {
                return up;
            }
        }
    }
    cfg.p_grid
        .choose(rng)
        .cloned()
        .unwrap_or_else(|| ratio(1, 2))
}

fn random_distribution(
    rng: &mut ChaCha8Rng,
    cfg: &InstanceGenConfig,
    shift: Rational,
) -> ExactDistribution {
    loop {
        let n_segments = rng.random_range(0..=cfg.max_segments);
        let n_atoms = rng.random_range(0..=cfg.max_atoms);
        if n_segments + n_atoms == 0 {
            continue;
        }

        let mut segments: Vec<(i64, i64)> = Vec::new();
        let mut starts: Vec<i64> = (0..LATTICE_MAX).collect();
        starts.shuffle(rng);
        for s in starts {
            if segments.len() == n_segments {
                break;
            }
            let len = if rng.random_bool(0.3) { 2 } else { 1 };
            let e = (s + len).min(LATTICE_MAX);
            if segments.iter().all(|&(a, b)| e <= a || s >= b) {
                segments.push((s, e));
            }
        }

        let endpoints: Vec<i64> = segments.iter().flat_map(|&(a, b)| [a, b]).collect();
        let mut atoms: Vec<i64> = Vec::new();
        for _ in 0..n_atoms {
            let loc = if !endpoints.is_empty() && rng.random_bool(0.5) {
                *endpoints.choose(rng).expect("non-empty")
            } else {
                rng.random_range(0..=LATTICE_MAX)
            };
            if !atoms.contains(&loc) {
                atoms.push(loc);
            }
        }

        let weights: Vec<i64> = (0..segments.len() + atoms.len())
            .map(|_| rng.random_range(1..=4))
            .collect();
        let total: i64 = weights.iter().sum();
        let mass = |w: i64| ratio(w, total);
        let at = |v: i64| ratio(v, 1) + shift.clone();
        let atom_list = atoms
            .iter()
            .zip(&weights)
            .map(|(&l, &w)| (at(l), mass(w)))
            .collect();
        let seg_list = segments
            .iter()
            .zip(&weights[atoms.len()..])
            .map(|(&(a, b), &w)| (at(a), at(b), mass(w)))
            .collect();
        if let Ok(d) = ExactDistribution::new(atom_list, seg_list) {
            return d;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_index() {
        let cfg = InstanceGenConfig::default();
        for i in 0..50 {
            let (a, pa) = generate_instance(&cfg, i);
            let (b, pb) = generate_instance(&cfg, i);
            assert_eq!(a, b);
            assert_eq!(pa, pb);
        }
        let (a, _) = generate_instance(&cfg, 0);
        let (b, _) = generate_instance(&InstanceGenConfig::with_seed(cfg.seed + 1), 0);
        assert_ne!(a, b);
    }

    #[test]
    fn instances_are_valid() {
        let cfg = InstanceGenConfig::default();
        for i in 0..500 {
            let (m, p) = generate_instance(&cfg, i);
            assert!(p > ratio(0, 1) && p < ratio(1, 1));
            assert!(*m.q() > ratio(0, 1) && *m.q() < ratio(1, 1));
            for d in [m.x(), m.y()] {
                let rebuilt =
                    ExactDistribution::from_parts(d.atoms().to_vec(), d.segments().to_vec());
                assert!(rebuilt.is_ok());
            }
        }
    }

    #[test]
    fn disjoint_lattices_share_no_breakpoint() {
        let cfg = InstanceGenConfig {
            allow_coincident_breakpoints: false,
            ..Default::default()
        };
        for i in 0..200 {
            let (m, _) = generate_instance(&cfg, i);
            let bx = m.x().breakpoints();
            assert!(m.y().breakpoints().iter().all(|b| !bx.contains(b)));
        }
    }
}
