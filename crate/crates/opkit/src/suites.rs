//! Named verification suites: one per invariant family across the crate.
//!
//! Every suite is a pure function of `(seed, scale)`; the report is
//! deterministic byte-for-byte for a fixed pair (wall time is measured
//! but kept out of the serialized payload). The CLI `verify` subcommand
//! and the acceptance tests both run these.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::channels::TreeKrausChannel;
use crate::cmatrix::CMatrix;
use crate::codes;
use crate::density::{self, DensityMatrix};
use crate::fixtures;
use crate::loops::{self, FiniteMagma};
use crate::measurement::{self, MeasurementTree, ProjectiveMeasurement};
use crate::perm::Permutation;
use crate::prob::{self, EntropyFamily, ProbVector};
use crate::qstate;
use crate::squares::ColoredSquare;
use crate::symplectic::{self, AlmostSymplectic};
use crate::trees::{enumerate_trees, PlanarTree};
use crate::{Error, Result};

/// Case-count profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Small,
    Full,
}

impl Scale {
    fn pick(self, small: usize, full: usize) -> usize {
        match self {
            Scale::Small => small,
            Scale::Full => full,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureRecord {
    pub case: usize,
    pub input: String,
    pub observed: String,
    pub expected: String,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub scale: Scale,
    pub cases: usize,
    pub failures: Vec<FailureRecord>,
    #[serde(skip)]
    pub wall_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Harness {
    suite: &'static str,
    seed: u64,
    scale: Scale,
    cases: usize,
    failures: Vec<FailureRecord>,
    start: Instant,
}

impl Harness {
    fn new(suite: &'static str, seed: u64, scale: Scale) -> Self {
        Harness {
            suite,
            seed,
            scale,
            cases: 0,
            failures: Vec::new(),
            start: Instant::now(),
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Records one case; `detail` is evaluated only on failure and
    /// returns (input, observed, expected).
    fn case(
        &mut self,
        tolerance: f64,
        ok: bool,
        detail: impl FnOnce() -> (String, String, String),
    ) {
        self.cases += 1;
        if !ok {
            let (input, observed, expected) = detail();
            self.failures.push(FailureRecord {
                case: self.cases,
                input,
                observed,
                expected,
                tolerance,
            });
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            schema: 1,
            suite: self.suite.to_string(),
            seed: self.seed,
            scale: self.scale,
            cases: self.cases,
            failures: self.failures,
            wall_ms: self.start.elapsed().as_millis(),
        }
    }
}

/// Registry entry: suite id, the law it verifies, and the runner.
pub struct SuiteDef {
    pub id: &'static str,
    pub law: &'static str,
    pub run: fn(u64, Scale) -> SuiteReport,
}

pub fn registry() -> &'static [SuiteDef] {
    &[
        SuiteDef {
            id: "trees-insertion-coherence",
            law: "the three insertion coherence identities hold as structural tree equalities",
            run: trees_insertion_coherence,
        },
        SuiteDef {
            id: "trees-graft-insertion",
            law: "full grafting equals the right-to-left iteration of single insertions",
            run: trees_graft_insertion,
        },
        SuiteDef {
            id: "trees-double-contraction",
            law: "the signed sum over ordered pairs of edge contractions vanishes per tree",
            run: trees_double_contraction,
        },
        SuiteDef {
            id: "prob-compose-simplex",
            law: "composed probabilities stay exactly nonnegative and sum to one",
            run: prob_compose_simplex,
        },
        SuiteDef {
            id: "prob-associativity",
            law: "both association orders of probability composition agree entrywise",
            run: prob_associativity,
        },
        SuiteDef {
            id: "prob-equivariance",
            law: "permuting weights and block-permuting parts block-permutes the output",
            run: prob_equivariance,
        },
        SuiteDef {
            id: "thermo-shannon-closed-form",
            law: "the Shannon thermodynamic minimum matches the log-sum-exp closed form",
            run: thermo_shannon_closed_form,
        },
        SuiteDef {
            id: "thermo-tropical-limit",
            law: "the minimum is monotone in the inverse temperature and tends to the smallest cost",
            run: thermo_tropical_limit,
        },
        SuiteDef {
            id: "density-majorization",
            law: "the sorted spectrum majorizes the sorted diagonal of every state",
            run: density_majorization,
        },
        SuiteDef {
            id: "density-shannon-dominance",
            law: "the diagonal Shannon entropy dominates the spectral Shannon entropy",
            run: density_shannon_dominance,
        },
        SuiteDef {
            id: "density-vn-spectrum",
            law: "the von Neumann entropy equals the Shannon entropy of the spectrum",
            run: density_vn_spectrum,
        },
        SuiteDef {
            id: "density-unitary-invariance",
            law: "unitary conjugation leaves the sorted spectrum unchanged",
            run: density_unitary_invariance,
        },
        SuiteDef {
            id: "qp-associativity",
            law: "diagonal-weight composition is associative; spectral composition obeys the sorted-union law",
            run: qp_associativity,
        },
        SuiteDef {
            id: "qp-equivariance-block",
            law: "permuting the root state and the slots block-permutes the composition",
            run: qp_equivariance_block,
        },
        SuiteDef {
            id: "qp-equivariance-slot",
            law: "acting inside each slot acts blockwise on the composition",
            run: qp_equivariance_slot,
        },
        SuiteDef {
            id: "qp-classical-restriction",
            law: "on diagonal states the quantum composition is the classical one",
            run: qp_classical_restriction,
        },
        SuiteDef {
            id: "ql-nonsymmetry-witness",
            law: "a concrete witness violates block equivariance for the spectral operad while slot equivariance survives",
            run: ql_nonsymmetry_witness,
        },
        SuiteDef {
            id: "q-output-validity",
            law: "compositions and insertions always output valid density matrices",
            run: q_output_validity,
        },
        SuiteDef {
            id: "meas-channel-collapse",
            law: "every tree refinement of a block measurement is the flat projective channel",
            run: meas_channel_collapse,
        },
        SuiteDef {
            id: "meas-telescoping",
            law: "the conditional trace products telescope to the leaf probabilities",
            run: meas_telescoping,
        },
        SuiteDef {
            id: "meas-vn-tree-independence",
            law: "the von Neumann tree entropy does not depend on the refinement",
            run: meas_vn_tree_independence,
        },
        SuiteDef {
            id: "meas-entropy-coherence",
            law: "zero-padding the spectrum leaves all three quantum entropies unchanged",
            run: meas_entropy_coherence,
        },
        SuiteDef {
            id: "qc-trace-preservation",
            law: "tree channels preserve trace and positivity",
            run: qc_trace_preservation,
        },
        SuiteDef {
            id: "qc-kraus-normalization",
            law: "the path operators of every channel satisfy the global Kraus normalization",
            run: qc_kraus_normalization,
        },
        SuiteDef {
            id: "qc-functoriality",
            law: "composing channels is grafting trees with the union of edge operators",
            run: qc_functoriality,
        },
        SuiteDef {
            id: "qc-differential-terms",
            law: "every differential term satisfies both vertex normalizations and contracts back",
            run: qc_differential_terms,
        },
        SuiteDef {
            id: "qc-structural-laws",
            law: "channel composition is associative and unital at the structural level",
            run: qc_structural_laws,
        },
        SuiteDef {
            id: "squares-disjointness",
            law: "substitution preserves pairwise disjoint interiors exactly",
            run: squares_disjointness,
        },
        SuiteDef {
            id: "squares-binary-closure",
            law: "dyadic tuples compose to dyadic tuples",
            run: squares_binary_closure,
        },
        SuiteDef {
            id: "squares-strictness-closure",
            law: "strict tuples compose to strict tuples",
            run: squares_strictness_closure,
        },
        SuiteDef {
            id: "squares-equivariance",
            law: "label permutations commute with substitution structurally",
            run: squares_equivariance,
        },
        SuiteDef {
            id: "sympl-grid-roundtrip",
            law: "pairings and grid colorings are exact mutual inverses",
            run: sympl_grid_roundtrip,
        },
        SuiteDef {
            id: "sympl-action-nondegenerate",
            law: "the action of a strict square on non-degenerate pairings is non-degenerate",
            run: sympl_action_nondegenerate,
        },
        SuiteDef {
            id: "sympl-action-compatibility",
            law: "acting by a composed square equals nesting the actions, cell by cell",
            run: sympl_action_compatibility,
        },
        SuiteDef {
            id: "sympl-loop-cancellative",
            law: "generated extension tables are left- and right-cancellative",
            run: sympl_loop_cancellative,
        },
        SuiteDef {
            id: "sympl-nonassoc-coboundary",
            law: "a nonzero halved coboundary is equivalent to a non-associative triple",
            run: sympl_nonassoc_coboundary,
        },
        SuiteDef {
            id: "loops-quasigroup-oracle",
            law: "the Latin-square predicate matches the two-determine-the-third oracle",
            run: loops_quasigroup_oracle,
        },
        SuiteDef {
            id: "loops-design-coverage",
            law: "loop designs have 3s points, s^2 lines, and unique pair completion",
            run: loops_design_coverage,
        },
        SuiteDef {
            id: "loops-design-graph",
            law: "design graphs carry three flags per line with identity involution",
            run: loops_design_graph,
        },
        SuiteDef {
            id: "loops-moufang-predicates",
            law: "groups satisfy the near-associativity identity and the order-5 loop does not",
            run: loops_moufang_predicates,
        },
        SuiteDef {
            id: "codes-s1-commutativity",
            law: "compressed translations of symmetric-zero pairs commute, with a witness outside",
            run: codes_s1_commutativity,
        },
        SuiteDef {
            id: "codes-relabel-invariance",
            law: "code dimensions are invariant under carrier relabelings",
            run: codes_relabel_invariance,
        },
        SuiteDef {
            id: "codes-partial-action",
            law: "partial-action decisions match brute-force re-verification of the composed data",
            run: codes_partial_action,
        },
        SuiteDef {
            id: "codes-chi-decomposition",
            law: "the character subspaces decompose the loop algebra with exact dimension count",
            run: codes_chi_decomposition,
        },
    ]
}

pub fn find(id: &str) -> Option<&'static SuiteDef> {
    registry().iter().find(|s| s.id == id)
}

pub fn run_suite(id: &str, seed: u64, scale: Scale) -> Result<SuiteReport> {
    let def = find(id).ok_or_else(|| Error::Parameter(format!("unknown suite '{id}'")))?;
    Ok((def.run)(seed, scale))
}

// ---- trees ----------------------------------------------------------

fn trees_insertion_coherence(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("trees-insertion-coherence", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(40, 200) {
        let x = {
            let nl = rng.gen_range(1..=6);
            fixtures::random_tree(&mut rng, nl)
        };
        let y = {
            let nl = rng.gen_range(1..=6);
            fixtures::random_tree(&mut rng, nl)
        };
        let z = {
            let nl = rng.gen_range(1..=6);
            fixtures::random_tree(&mut rng, nl)
        };
        let (a, b, c) = (x.leaf_count(), y.leaf_count(), z.leaf_count());
        let j = rng.gen_range(1..=a);
        let i = rng.gen_range(1..=a + b - 1);
        let lhs = x.insert(j, &y).unwrap().insert(i, &z).unwrap();
        let rhs = if i < j {
            x.insert(i, &z).unwrap().insert(j + c - 1, &y).unwrap()
        } else if i < b + j {
            x.insert(j, &y.insert(i - j + 1, &z).unwrap()).unwrap()
        } else {
            x.insert(i - b + 1, &z).unwrap().insert(j, &y).unwrap()
        };
        h.case(0.0, lhs == rhs, || {
            (
                format!("x={x} y={y} z={z} i={i} j={j}"),
                lhs.canonical(),
                rhs.canonical(),
            )
        });
    }
    h.finish()
}

fn trees_graft_insertion(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("trees-graft-insertion", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(60, 300) {
        let tau = {
            let nl = rng.gen_range(1..=5);
            fixtures::random_tree(&mut rng, nl)
        };
        let subs: Vec<PlanarTree> = (0..tau.leaf_count())
            .map(|_| {
                let m = rng.gen_range(1..=4);
                fixtures::random_tree(&mut rng, m)
            })
            .collect();
        let grafted = tau.graft(&subs).unwrap();
        let mut acc = tau.clone();
        for i in (1..=subs.len()).rev() {
            acc = acc.insert(i, &subs[i - 1]).unwrap();
        }
        h.case(0.0, grafted == acc, || {
            (tau.canonical(), acc.canonical(), grafted.canonical())
        });
    }
    h.finish()
}

fn trees_double_contraction(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("trees-double-contraction", seed, scale);
    for n in 1..=scale.pick(5, 6) {
        for tau in enumerate_trees(n) {
            if tau.internal_edge_count() > 3 {
                continue;
            }
            let mut acc: std::collections::HashMap<String, i64> = std::collections::HashMap::new();
            for (t1, s1) in tau.enumerate_contractions() {
                for (t2, s2) in t1.enumerate_contractions() {
                    *acc.entry(t2.canonical()).or_insert(0) += (s1 * s2) as i64;
                }
            }
            let residue = acc.values().map(|v| v.abs()).max().unwrap_or(0);
            h.case(0.0, residue == 0, || {
                (
                    tau.canonical(),
                    format!("max coefficient {residue}"),
                    "0".into(),
                )
            });
        }
    }
    h.finish()
}

// ---- prob -----------------------------------------------------------

fn random_prob_instance(rng: &mut ChaCha8Rng) -> (ProbVector, Vec<ProbVector>) {
    let n = rng.gen_range(1..=4usize);
    let p = fixtures::random_prob(rng, n);
    let parts = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=4usize);
            fixtures::random_prob(rng, k)
        })
        .collect();
    (p, parts)
}

fn prob_compose_simplex(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("prob-compose-simplex", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(500, 2000) {
        let (p, parts) = random_prob_instance(&mut rng);
        let out = prob::compose(&p, &parts).unwrap();
        let nonneg = out.as_slice().iter().all(|&x| x >= 0.0);
        let sum = out.as_slice().iter().sum::<f64>();
        h.case(1e-12, nonneg && (sum - 1.0).abs() <= 1e-12, || {
            (
                format!("{:?}", p.as_slice()),
                format!("sum {sum}"),
                "1".into(),
            )
        });
    }
    h.finish()
}

fn prob_associativity(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("prob-associativity", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(500, 2000) {
        let (p, mids) = random_prob_instance(&mut rng);
        let inners: Vec<Vec<ProbVector>> = mids
            .iter()
            .map(|m| {
                (0..m.len())
                    .map(|_| {
                        let k = rng.gen_range(1..=4usize);
                        fixtures::random_prob(&mut rng, k)
                    })
                    .collect()
            })
            .collect();
        let flat: Vec<ProbVector> = inners.iter().flatten().cloned().collect();
        let lhs = prob::compose(&prob::compose(&p, &mids).unwrap(), &flat).unwrap();
        let composed: Vec<ProbVector> = mids
            .iter()
            .zip(&inners)
            .map(|(m, inner)| prob::compose(m, inner).unwrap())
            .collect();
        let rhs = prob::compose(&p, &composed).unwrap();
        let diff = lhs
            .as_slice()
            .iter()
            .zip(rhs.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        h.case(1e-12, diff <= 1e-12, || {
            (
                format!("{:?}", p.as_slice()),
                format!("diff {diff:.3e}"),
                "0".into(),
            )
        });
    }
    h.finish()
}

fn prob_equivariance(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("prob-equivariance", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(500, 2000) {
        let (p, parts) = random_prob_instance(&mut rng);
        let n = p.len();
        let sigma = fixtures::random_permutation(&mut rng, n);
        let inv = sigma.inverse();
        let permuted_p = ProbVector::new(sigma.push(p.as_slice())).unwrap();
        let permuted_parts: Vec<ProbVector> = (0..n).map(|i| parts[inv.apply(i)].clone()).collect();
        let lhs = prob::compose(&permuted_p, &permuted_parts).unwrap();
        let sizes: Vec<usize> = parts.iter().map(|q| q.len()).collect();
        let tilde = sigma.block_expand(&sizes);
        let rhs =
            ProbVector::new(tilde.push(prob::compose(&p, &parts).unwrap().as_slice())).unwrap();
        let diff = lhs
            .as_slice()
            .iter()
            .zip(rhs.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        h.case(1e-12, diff <= 1e-12, || {
            (
                format!("{:?}", p.as_slice()),
                format!("diff {diff:.3e}"),
                "0".into(),
            )
        });
    }
    h.finish()
}

fn thermo_shannon_closed_form(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("thermo-shannon-closed-form", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(12, 40) {
        let n = rng.gen_range(2..=5usize);
        let tau = fixtures::random_tree(&mut rng, n);
        let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
        for beta in [0.5, 1.0, 4.0] {
            let v = prob::thermo_algebra(EntropyFamily::Shannon, &tau, &xs, beta).unwrap();
            let lse = prob::log_sum_exp_min(&xs, beta);
            h.case(1e-8, (v - lse).abs() <= 1e-8, || {
                (
                    format!("xs={xs:?} beta={beta}"),
                    format!("{v}"),
                    format!("{lse}"),
                )
            });
        }
    }
    h.finish()
}

fn thermo_tropical_limit(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("thermo-tropical-limit", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(8, 25) {
        let n = rng.gen_range(2..=4usize);
        let tau = PlanarTree::corolla(n);
        let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
        let min = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let values: Vec<f64> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&b| prob::thermo_algebra(EntropyFamily::Shannon, &tau, &xs, b).unwrap())
            .collect();
        // the minimum rises with beta toward min_i x_i from below
        let monotone = values[0] <= values[1] + 1e-9 && values[1] <= values[2] + 1e-9;
        let bounded = values.iter().all(|&v| v <= min + 1e-9);
        let limit = (values[2] - min).abs() <= 1e-2;
        h.case(1e-2, monotone && bounded && limit, || {
            (
                format!("xs={xs:?}"),
                format!("{values:?}"),
                format!("-> {min}"),
            )
        });
    }
    h.finish()
}

// ---- density --------------------------------------------------------

fn density_majorization(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("density-majorization", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(1000, 4000) {
        let n = rng.gen_range(2..=6usize);
        let rho = fixtures::random_density(&mut rng, n);
        let spec = rho.eig_prob().unwrap();
        let mut diag = rho.diag_prob().unwrap().as_slice().to_vec();
        diag.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let ok = density::majorizes(spec.as_slice(), &diag).unwrap();
        h.case(1e-9, ok, || {
            (
                format!("dim {n}"),
                format!("{:?}", spec.as_slice()),
                format!("{diag:?}"),
            )
        });
    }
    h.finish()
}

fn density_shannon_dominance(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("density-shannon-dominance", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(1000, 4000) {
        let n = rng.gen_range(2..=6usize);
        let rho = fixtures::random_density(&mut rng, n);
        let sp = prob::classical_entropy(EntropyFamily::Shannon, &rho.diag_prob().unwrap());
        let sl = prob::entropy_slice(EntropyFamily::Shannon, rho.eig_prob().unwrap().as_slice());
        h.case(1e-9, sp >= sl - 1e-9, || {
            (
                format!("dim {n}"),
                format!("S(P) = {sp}"),
                format!(">= S(Lambda) = {sl}"),
            )
        });
    }
    h.finish()
}

fn density_vn_spectrum(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("density-vn-spectrum", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(300, 1000) {
        let n = rng.gen_range(2..=6usize);
        let rho = fixtures::random_density(&mut rng, n);
        // matrix-function route: -Tr(rho log rho) through the
        // eigendecomposition, independent of the spectrum-only route
        let (vals, vecs) = rho.eigen().unwrap();
        let logs: Vec<f64> = vals
            .iter()
            .map(|&l| if l > 1e-14 { l.ln() } else { 0.0 })
            .collect();
        let log_rho = vecs.mul(&CMatrix::diag(&logs)).mul(&vecs.adjoint());
        let vn = -rho.matrix().mul(&log_rho).trace().re;
        let shannon = prob::entropy_slice(
            EntropyFamily::Shannon,
            rho.eig_prob().unwrap().to_prob().unwrap().as_slice(),
        );
        h.case(1e-9, (vn - shannon).abs() <= 1e-9, || {
            (format!("dim {n}"), format!("{vn}"), format!("{shannon}"))
        });
    }
    h.finish()
}

fn density_unitary_invariance(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("density-unitary-invariance", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(200, 800) {
        let n = rng.gen_range(2..=5usize);
        let rho = fixtures::random_density(&mut rng, n);
        let u = fixtures::random_unitary(&mut rng, n);
        let conj = DensityMatrix::new(u.mul(rho.matrix()).mul(&u.adjoint())).unwrap();
        let a = rho.eig_prob().unwrap();
        let b = conj.eig_prob().unwrap();
        let diff = a
            .as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        h.case(1e-9, diff <= 1e-9, || {
            (format!("dim {n}"), format!("diff {diff:.3e}"), "0".into())
        });
    }
    h.finish()
}

// ---- qstate ---------------------------------------------------------

fn random_state_instance(
    rng: &mut ChaCha8Rng,
) -> (DensityMatrix, Vec<DensityMatrix>, Vec<Vec<DensityMatrix>>) {
    let m = rng.gen_range(1..=3usize);
    let rho = fixtures::random_density(rng, m);
    let mids: Vec<DensityMatrix> = (0..m)
        .map(|_| {
            let k = rng.gen_range(1..=3usize);
            fixtures::random_density(rng, k)
        })
        .collect();
    let inners: Vec<Vec<DensityMatrix>> = mids
        .iter()
        .map(|mid| {
            (0..mid.dim())
                .map(|_| {
                    let k = rng.gen_range(1..=2usize);
                    fixtures::random_density(rng, k)
                })
                .collect()
        })
        .collect();
    (rho, mids, inners)
}

fn qp_associativity(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("qp-associativity", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(300, 1000) {
        let (rho, mids, inners) = random_state_instance(&mut rng);
        let flat: Vec<DensityMatrix> = inners.iter().flatten().cloned().collect();
        let lhs = qstate::gamma_p(&qstate::gamma_p(&rho, &mids).unwrap(), &flat).unwrap();
        let composed: Vec<DensityMatrix> = mids
            .iter()
            .zip(&inners)
            .map(|(m, inner)| qstate::gamma_p(m, inner).unwrap())
            .collect();
        let rhs = qstate::gamma_p(&rho, &composed).unwrap();
        let diff = lhs.matrix().max_abs_diff(rhs.matrix());
        h.case(1e-10, diff <= 1e-10, || {
            (
                "nested diagonal-weight composition".into(),
                format!("diff {diff:.3e}"),
                "0".into(),
            )
        });

        // spectral route: the sorted spectrum of the composition is the
        // sorted union of the scaled part spectra
        let lam = rho.eig_prob().unwrap();
        let composed = qstate::gamma_lambda(&rho, &mids).unwrap();
        let got = composed.eig_prob().unwrap();
        let mut expect: Vec<f64> = Vec::new();
        for (i, part) in mids.iter().enumerate() {
            let w = lam.as_slice()[i].max(0.0);
            expect.extend(part.eig_prob().unwrap().as_slice().iter().map(|&x| w * x));
        }
        expect.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let sdiff = got
            .as_slice()
            .iter()
            .zip(&expect)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        h.case(1e-9, sdiff <= 1e-9, || {
            (
                "spectral composition law".into(),
                format!("diff {sdiff:.3e}"),
                "0".into(),
            )
        });
    }
    h.finish()
}

fn qp_equivariance_block(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("qp-equivariance-block", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(300, 1000) {
        let m = rng.gen_range(2..=3usize);
        let rho = fixtures::random_density(&mut rng, m);
        let parts: Vec<DensityMatrix> = (0..m)
            .map(|_| {
                let k = rng.gen_range(1..=3usize);
                fixtures::random_density(&mut rng, k)
            })
            .collect();
        let sizes: Vec<usize> = parts.iter().map(|p| p.dim()).collect();
        let sigma = fixtures::random_permutation(&mut rng, m);
        let inv = sigma.inverse();
        let permuted: Vec<DensityMatrix> = (0..m).map(|i| parts[inv.apply(i)].clone()).collect();
        let lhs = qstate::gamma_p(&qstate::perm_act(&sigma, &rho).unwrap(), &permuted).unwrap();
        let tilde = sigma.block_expand(&sizes);
        let rhs = qstate::perm_act(&tilde, &qstate::gamma_p(&rho, &parts).unwrap()).unwrap();
        let diff = lhs.matrix().max_abs_diff(rhs.matrix());
        h.case(1e-10, diff <= 1e-10, || {
            (
                "block equivariance".into(),
                format!("diff {diff:.3e}"),
                "0".into(),
            )
        });
    }
    h.finish()
}

fn qp_equivariance_slot(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("qp-equivariance-slot", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(300, 1000) {
        let m = rng.gen_range(1..=3usize);
        let rho = fixtures::random_density(&mut rng, m);
        let parts: Vec<DensityMatrix> = (0..m)
            .map(|_| {
                let k = rng.gen_range(1..=3usize);
                fixtures::random_density(&mut rng, k)
            })
            .collect();
        let inner_perms: Vec<Permutation> = parts
            .iter()
            .map(|p| fixtures::random_permutation(&mut rng, p.dim()))
            .collect();
        let acted: Vec<DensityMatrix> = parts
            .iter()
            .zip(&inner_perms)
            .map(|(p, s)| qstate::perm_act(s, p).unwrap())
            .collect();
        let lhs = qstate::gamma_p(&rho, &acted).unwrap();
        let hat = Permutation::blockwise(&inner_perms);
        let rhs = qstate::perm_act(&hat, &qstate::gamma_p(&rho, &parts).unwrap()).unwrap();
        let diff = lhs.matrix().max_abs_diff(rhs.matrix());
        h.case(1e-10, diff <= 1e-10, || {
            (
                "slot equivariance".into(),
                format!("diff {diff:.3e}"),
                "0".into(),
            )
        });
    }
    h.finish()
}

fn qp_classical_restriction(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("qp-classical-restriction", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(200, 800) {
        let (p, parts_p) = random_prob_instance(&mut rng);
        let rho = DensityMatrix::from_prob(&p);
        let parts: Vec<DensityMatrix> = parts_p.iter().map(DensityMatrix::from_prob).collect();
        let out = qstate::gamma_p(&rho, &parts).unwrap();
        let classical = prob::compose(&p, &parts_p).unwrap();
        let diff = out
            .matrix()
            .max_abs_diff(DensityMatrix::from_prob(&classical).matrix());
        h.case(1e-12, diff <= 1e-12, || {
            (
                "diagonal restriction".into(),
                format!("diff {diff:.3e}"),
                "0".into(),
            )
        });
    }
    h.finish()
}

fn ql_nonsymmetry_witness(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("ql-nonsymmetry-witness", seed, scale);
    let rho = DensityMatrix::new(CMatrix::diag(&[0.3, 0.7])).unwrap();
    let parts = vec![
        DensityMatrix::new(CMatrix::diag(&[1.0, 0.0])).unwrap(),
        DensityMatrix::maximally_mixed(2),
    ];
    let sigma = Permutation::transposition(2, 0, 1);
    let inv = sigma.inverse();
    let permuted: Vec<DensityMatrix> = (0..2).map(|i| parts[inv.apply(i)].clone()).collect();
    let lhs = qstate::gamma_lambda(&qstate::perm_act(&sigma, &rho).unwrap(), &permuted).unwrap();
    let tilde = sigma.block_expand(&[2, 2]);
    let rhs = qstate::perm_act(&tilde, &qstate::gamma_lambda(&rho, &parts).unwrap()).unwrap();
    let gap = lhs.matrix().max_abs_diff(rhs.matrix());
    h.case(0.05, gap > 0.05, || {
        (
            "recorded non-symmetry witness".into(),
            format!("gap {gap:.3e}"),
            "> 0.05".into(),
        )
    });

    // slot equivariance still holds for the spectral operad
    let mut rng = h.rng();
    let inner_perms = vec![
        fixtures::random_permutation(&mut rng, 2),
        fixtures::random_permutation(&mut rng, 2),
    ];
    let acted: Vec<DensityMatrix> = parts
        .iter()
        .zip(&inner_perms)
        .map(|(p, s)| qstate::perm_act(s, p).unwrap())
        .collect();
    let lhs2 = qstate::gamma_lambda(&rho, &acted).unwrap();
    let hat = Permutation::blockwise(&inner_perms);
    let rhs2 = qstate::perm_act(&hat, &qstate::gamma_lambda(&rho, &parts).unwrap()).unwrap();
    let diff2 = lhs2.matrix().max_abs_diff(rhs2.matrix());
    h.case(1e-10, diff2 <= 1e-10, || {
        (
            "slot equivariance for the spectral operad".into(),
            format!("{diff2:.3e}"),
            "0".into(),
        )
    });

    // recorded counterexample: globally sorting the spectrum interleaves
    // blocks, so full entrywise associativity fails
    let rho = DensityMatrix::new(CMatrix::diag(&[0.6, 0.4])).unwrap();
    let mids = vec![
        DensityMatrix::new(CMatrix::diag(&[1.0, 0.0])).unwrap(),
        DensityMatrix::maximally_mixed(2),
    ];
    let inners = vec![
        DensityMatrix::unit(),
        DensityMatrix::new(CMatrix::diag(&[0.2, 0.8])).unwrap(),
        DensityMatrix::unit(),
        DensityMatrix::maximally_mixed(2),
    ];
    let lhs3 = qstate::gamma_lambda(&qstate::gamma_lambda(&rho, &mids).unwrap(), &inners).unwrap();
    let rhs3 = qstate::gamma_lambda(
        &rho,
        &[
            qstate::gamma_lambda(&mids[0], &inners[0..2].to_vec()).unwrap(),
            qstate::gamma_lambda(&mids[1], &inners[2..4].to_vec()).unwrap(),
        ],
    )
    .unwrap();
    let gap3 = lhs3.matrix().max_abs_diff(rhs3.matrix());
    h.case(0.05, gap3 > 0.05, || {
        (
            "recorded entrywise-associativity counterexample".into(),
            format!("gap {gap3:.3e}"),
            "> 0.05".into(),
        )
    });
    h.finish()
}

fn q_output_validity(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("q-output-validity", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(200, 600) {
        let m = rng.gen_range(1..=3usize);
        let rho = fixtures::random_density(&mut rng, m);
        let parts: Vec<DensityMatrix> = (0..m)
            .map(|_| {
                let k = rng.gen_range(1..=3usize);
                fixtures::random_density(&mut rng, k)
            })
            .collect();
        // constructors validate Hermitian/trace/PSD on every output
        let a = qstate::gamma_p(&rho, &parts).is_ok();
        let b = qstate::gamma_lambda(&rho, &parts).is_ok();
        let i = rng.gen_range(1..=m);
        let c = qstate::insert_p(&rho, i, &parts[0]).is_ok();
        // the spectral insertion is exercised where it is self-consistent
        let mut diag: Vec<f64> = rho.diag_prob().unwrap().as_slice().to_vec();
        diag.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let sorted = DensityMatrix::new(CMatrix::diag(&diag)).unwrap();
        let d = qstate::insert_lambda(&sorted, i, &parts[0]).is_ok();
        h.case(0.0, a && b && c && d, || {
            (
                "composition outputs".into(),
                format!("{a} {b} {c} {d}"),
                "all valid".into(),
            )
        });
    }
    h.finish()
}

// ---- measurement ----------------------------------------------------

fn meas_channel_collapse(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("meas-channel-collapse", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(20, 60) {
        // 4-block partitions admit 11 refinement trees; sample at least 5
        let parts = loop {
            let p = fixtures::random_composition(&mut rng, 6, 4);
            if p.len() == 4 {
                break p;
            }
        };
        let dim: usize = parts.iter().sum();
        let rho = fixtures::random_density(&mut rng, dim);
        let flat = ProjectiveMeasurement::standard_blocks(dim, &parts)
            .unwrap()
            .project(&rho)
            .unwrap();
        let mut refinements = enumerate_trees(parts.len());
        refinements.truncate(6);
        for tau in refinements {
            let mt = MeasurementTree::from_partition(tau.clone(), &parts).unwrap();
            let refined = mt.apply(&rho).unwrap();
            let pdiff = refined
                .probs
                .as_slice()
                .iter()
                .zip(flat.probs.as_slice())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let mut sdiff = 0.0f64;
            for (s, t) in refined.states.iter().zip(&flat.states) {
                if let (Some(s), Some(t)) = (s, t) {
                    sdiff = sdiff.max(s.matrix().max_abs_diff(t.matrix()));
                }
            }
            h.case(1e-9, pdiff <= 1e-9 && sdiff <= 1e-9, || {
                (
                    format!("partition {parts:?} tree {tau}"),
                    format!("{pdiff:.2e}/{sdiff:.2e}"),
                    "0".into(),
                )
            });
        }
    }
    h.finish()
}

fn meas_telescoping(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("meas-telescoping", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(20, 60) {
        let parts = loop {
            let p = fixtures::random_composition(&mut rng, 5, 4);
            if p.len() >= 2 {
                break p;
            }
        };
        let dim: usize = parts.iter().sum();
        let rho = fixtures::random_density(&mut rng, dim);
        let tau = fixtures::random_tree(&mut rng, parts.len());
        let mt = MeasurementTree::from_partition(tau.clone(), &parts).unwrap();
        let ix = tau.index();
        for (i, &leaf) in ix.leaves.iter().enumerate() {
            let mut vertices = vec![leaf];
            let mut v = leaf;
            while let Some(p) = ix.parent[v] {
                vertices.push(p);
                v = p;
            }
            let tr = |node: usize| mt.projector(node).mul(rho.matrix()).trace().re;
            let mut product = 1.0;
            let mut valid = true;
            for w in vertices.windows(2) {
                let denom = tr(w[1]);
                if denom <= measurement::PRUNE_TOL {
                    valid = false;
                    break;
                }
                product *= tr(w[0]) / denom;
            }
            if !valid {
                continue;
            }
            let leaf_prob = tr(leaf);
            h.case(1e-10, (product - leaf_prob).abs() <= 1e-10, || {
                (
                    format!("leaf {i} of {tau}"),
                    format!("{product}"),
                    format!("{leaf_prob}"),
                )
            });
        }
    }
    h.finish()
}

fn meas_vn_tree_independence(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("meas-vn-tree-independence", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(15, 50) {
        let parts = loop {
            let p = fixtures::random_composition(&mut rng, 5, 3);
            if p.len() >= 2 {
                break p;
            }
        };
        let dim: usize = parts.iter().sum();
        let rho = fixtures::random_density(&mut rng, dim);
        let blocked = measurement::block_channel(dim, &parts, &rho).unwrap();
        let flat_value = density::quantum_entropy(EntropyFamily::Shannon, &blocked).unwrap();
        for tau in enumerate_trees(parts.len()).into_iter().take(5) {
            let mt = MeasurementTree::from_partition(tau.clone(), &parts).unwrap();
            let v = mt.tree_entropy(EntropyFamily::Shannon, &rho).unwrap();
            h.case(1e-9, (v - flat_value).abs() <= 1e-9, || {
                (
                    format!("partition {parts:?} tree {tau}"),
                    format!("{v}"),
                    format!("{flat_value}"),
                )
            });
        }
    }
    h.finish()
}

fn meas_entropy_coherence(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("meas-entropy-coherence", seed, scale);
    let mut rng = h.rng();
    let families = [
        EntropyFamily::Shannon,
        EntropyFamily::renyi(2.0).unwrap(),
        EntropyFamily::tsallis(2.0).unwrap(),
    ];
    for _ in 0..scale.pick(50, 200) {
        let n = rng.gen_range(2..=4usize);
        let pad = rng.gen_range(1..=3usize);
        let rho = fixtures::random_density(&mut rng, n);
        let mut padded = CMatrix::zeros(n + pad, n + pad);
        padded.paste(0, 0, rho.matrix());
        let padded = DensityMatrix::new(padded).unwrap();
        for fam in families {
            let a = density::quantum_entropy(fam, &rho).unwrap();
            let b = density::quantum_entropy(fam, &padded).unwrap();
            h.case(1e-9, (a - b).abs() <= 1e-9, || {
                (format!("{fam:?} pad {pad}"), format!("{b}"), format!("{a}"))
            });
        }
    }
    h.finish()
}

// ---- channels -------------------------------------------------------

fn qc_trace_preservation(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("qc-trace-preservation", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(500, 1500) {
        let n_leaves = rng.gen_range(1..=5usize);
        let dim = rng.gen_range(1..=4usize);
        let tree = fixtures::random_tree(&mut rng, n_leaves);
        let c = fixtures::random_channel(&mut rng, &tree, dim);
        let rho = fixtures::random_density(&mut rng, dim);
        // the state validator enforces PSD within 1e-9 and unit trace
        let out = c.apply(&rho);
        let ok = out
            .as_ref()
            .map(|o| (o.matrix().trace().re - 1.0).abs() <= 1e-9)
            .unwrap_or(false);
        h.case(1e-9, ok, || {
            (
                format!("tree {tree} dim {dim}"),
                format!("{out:?}"),
                "valid state".into(),
            )
        });
    }
    h.finish()
}

fn qc_kraus_normalization(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("qc-kraus-normalization", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(500, 1500) {
        let n_leaves = rng.gen_range(1..=5usize);
        let dim = rng.gen_range(1..=4usize);
        let tree = fixtures::random_tree(&mut rng, n_leaves);
        let c = fixtures::random_channel(&mut rng, &tree, dim);
        let mut norm = CMatrix::zeros(dim, dim);
        for a in c.path_operators() {
            norm = norm.add(&a.adjoint().mul(&a));
        }
        let diff = norm.max_abs_diff(&CMatrix::identity(dim));
        h.case(1e-9, diff <= 1e-9, || {
            (
                format!("tree {tree} dim {dim}"),
                format!("diff {diff:.3e}"),
                "identity".into(),
            )
        });
    }
    h.finish()
}

fn qc_functoriality(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("qc-functoriality", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(100, 300) {
        let dim = rng.gen_range(1..=3usize);
        let outer_tree = {
            let nl = rng.gen_range(1..=3);
            fixtures::random_tree(&mut rng, nl)
        };
        let outer = fixtures::random_channel(&mut rng, &outer_tree, dim);
        let parts: Vec<TreeKrausChannel> = (0..outer.leaf_count())
            .map(|_| {
                let t = {
                    let nl = rng.gen_range(1..=3);
                    fixtures::random_tree(&mut rng, nl)
                };
                fixtures::random_channel(&mut rng, &t, dim)
            })
            .collect();
        let composed = outer.compose(&parts).unwrap();
        // structural identity: grafted tree carries the union of the ops
        let part_trees: Vec<PlanarTree> = parts.iter().map(|p| p.tree().clone()).collect();
        let tree_ok = *composed.tree() == outer_tree.graft(&part_trees).unwrap();
        // value identity against nested application of path operators
        let rho = fixtures::random_density(&mut rng, dim);
        let mut manual = CMatrix::zeros(dim, dim);
        let outer_paths = outer.path_operators();
        for (leaf, part) in parts.iter().enumerate() {
            for b in part.path_operators() {
                let full = b.mul(&outer_paths[leaf]);
                manual = manual.add(&full.mul(rho.matrix()).mul(&full.adjoint()));
            }
        }
        let diff = composed.apply(&rho).unwrap().matrix().max_abs_diff(&manual);
        h.case(1e-12, tree_ok && diff <= 1e-12, || {
            (
                format!("outer {outer_tree}"),
                format!("tree {tree_ok}, diff {diff:.3e}"),
                "0".into(),
            )
        });
    }
    h.finish()
}

fn qc_differential_terms(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("qc-differential-terms", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(80, 250) {
        let dim = rng.gen_range(1..=3usize);
        let tree = loop {
            let t = {
                let nl = rng.gen_range(3..=5);
                fixtures::random_tree(&mut rng, nl)
            };
            if t.index().children.iter().any(|k| k.len() >= 3) {
                break t;
            }
        };
        let c = fixtures::random_channel(&mut rng, &tree, dim);
        let d = match c.differential() {
            Ok(d) => d,
            Err(e) => {
                h.case(1e-8, false, || {
                    (
                        format!("tree {tree}"),
                        format!("{e}"),
                        "differential".into(),
                    )
                });
                continue;
            }
        };
        let mut worst = 0.0f64;
        let mut contracts = true;
        for (_, term) in &d.terms {
            let ix = term.tree().index();
            for kids in ix.children.iter().filter(|k| !k.is_empty()) {
                let sum = kids.iter().fold(CMatrix::zeros(dim, dim), |acc, &k| {
                    let a = term.edge_op(k).unwrap();
                    acc.add(&a.adjoint().mul(a))
                });
                worst = worst.max(sum.max_abs_diff(&CMatrix::identity(dim)));
            }
            // the emitted skeleton contracts back to the base tree
            let found = term
                .tree()
                .internal_edges()
                .iter()
                .any(|&e| term.tree().contract_edge(e).unwrap() == tree);
            contracts &= found;
        }
        h.case(1e-8, worst <= 1e-8 && contracts, || {
            (
                format!("tree {tree}"),
                format!("worst {worst:.3e}, contracts {contracts}"),
                "<= 1e-8".into(),
            )
        });
    }
    h.finish()
}

fn qc_structural_laws(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("qc-structural-laws", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(50, 200) {
        let dim = rng.gen_range(1..=3usize);
        let outer_tree = {
            let nl = rng.gen_range(1..=2);
            fixtures::random_tree(&mut rng, nl)
        };
        let outer = fixtures::random_channel(&mut rng, &outer_tree, dim);
        let mids: Vec<TreeKrausChannel> = (0..outer.leaf_count())
            .map(|_| {
                let t = {
                    let nl = rng.gen_range(1..=2);
                    fixtures::random_tree(&mut rng, nl)
                };
                fixtures::random_channel(&mut rng, &t, dim)
            })
            .collect();
        let total: usize = mids.iter().map(|m| m.leaf_count()).sum();
        let inners: Vec<TreeKrausChannel> = (0..total)
            .map(|_| {
                let t = {
                    let nl = rng.gen_range(1..=2);
                    fixtures::random_tree(&mut rng, nl)
                };
                fixtures::random_channel(&mut rng, &t, dim)
            })
            .collect();
        let lhs = outer.compose(&mids).unwrap().compose(&inners).unwrap();
        let mut rhs_parts = Vec::new();
        let mut off = 0;
        for m in &mids {
            let k = m.leaf_count();
            rhs_parts.push(m.compose(&inners[off..off + k]).unwrap());
            off += k;
        }
        let rhs = outer.compose(&rhs_parts).unwrap();
        let assoc = lhs == rhs;
        let units: Vec<TreeKrausChannel> = (0..outer.leaf_count())
            .map(|_| TreeKrausChannel::unit(dim))
            .collect();
        let unit_law = outer.compose(&units).unwrap() == outer
            && TreeKrausChannel::unit(dim)
                .compose(&[outer.clone()])
                .unwrap()
                == outer;
        h.case(0.0, assoc && unit_law, || {
            (
                "structural channel laws".into(),
                format!("assoc {assoc}, unit {unit_law}"),
                "exact".into(),
            )
        });
    }
    h.finish()
}

// ---- squares --------------------------------------------------------

fn squares_disjointness(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("squares-disjointness", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(200, 600) {
        let c = fixtures::random_tuple(&mut rng, 3, 2, 3);
        let d = fixtures::random_tuple(&mut rng, 3, 2, 3);
        let i = rng.gen_range(1..=c.len());
        let ok = match c.compose(i, &d) {
            Ok(out) => {
                let rects = out.rects();
                (0..rects.len())
                    .all(|a| (a + 1..rects.len()).all(|b| !rects[a].interior_intersects(&rects[b])))
            }
            Err(_) => false,
        };
        h.case(0.0, ok, || {
            (
                format!("{} into slot {i} of {}", d.len(), c.len()),
                "overlap".into(),
                "disjoint".into(),
            )
        });
    }
    h.finish()
}

fn squares_binary_closure(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("squares-binary-closure", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(200, 600) {
        let c = fixtures::random_tuple(&mut rng, 3, 2, 3);
        let d = fixtures::random_tuple(&mut rng, 2, 2, 3);
        let i = rng.gen_range(1..=c.len());
        let out = c.compose(i, &d).unwrap();
        h.case(0.0, out.grid_exponent(2).is_some(), || {
            (
                "composed dyadic tuple".into(),
                "non-dyadic corner".into(),
                "dyadic".into(),
            )
        });
    }
    h.finish()
}

fn squares_strictness_closure(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("squares-strictness-closure", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(200, 600) {
        let c = fixtures::random_strict_tuple(&mut rng, 2, 4);
        let d = fixtures::random_strict_tuple(&mut rng, 2, 4);
        let i = rng.gen_range(1..=c.len());
        let out = c.compose(i, &d).unwrap();
        let strict = out.is_strict(2).unwrap_or(false);
        h.case(0.0, strict, || {
            (format!("slot {i}"), "not strict".into(), "strict".into())
        });
    }
    h.finish()
}

fn squares_equivariance(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("squares-equivariance", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(50, 200) {
        let c = fixtures::random_tuple(&mut rng, 3, 2, 2);
        let d = fixtures::random_tuple(&mut rng, 2, 2, 2);
        let n = c.len();
        let m = d.len();
        let sigma = fixtures::random_permutation(&mut rng, n);
        let i = rng.gen_range(1..=n);
        let lhs = c.permute(&sigma).compose(i, &d).unwrap();
        let target = sigma.apply(i - 1);
        let rhs_core = c.compose(target + 1, &d).unwrap();
        let images: Vec<usize> = (0..n + m - 1)
            .map(|j| {
                if j < i - 1 {
                    let s = sigma.apply(j);
                    if s < target {
                        s
                    } else {
                        s + m - 1
                    }
                } else if j < i - 1 + m {
                    target + (j - (i - 1))
                } else {
                    let s = sigma.apply(j - m + 1);
                    if s < target {
                        s
                    } else {
                        s + m - 1
                    }
                }
            })
            .collect();
        // pull the rhs rectangles to the lhs slot order
        let pull = Permutation::from_images(images).unwrap();
        let rhs = rhs_core.permute(&pull);
        h.case(0.0, lhs == rhs, || {
            (
                format!("sigma on {n} slots, insert at {i}"),
                "mismatch".into(),
                "equal".into(),
            )
        });
    }
    h.finish()
}

// ---- symplectic -----------------------------------------------------

fn sympl_grid_roundtrip(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("sympl-grid-roundtrip", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(100, 400) {
        let p = *[2usize, 3, 5].get(rng.gen_range(0..3)).unwrap();
        let omega = symplectic::random_omega(&mut rng, p, 1, false);
        let grid = omega.to_grid();
        let back = AlmostSymplectic::from_grid(&grid).unwrap();
        let strict = grid.is_strict().unwrap_or(false);
        h.case(0.0, back == omega && strict, || {
            (
                format!("p={p}"),
                "roundtrip drift".into(),
                "identical".into(),
            )
        });
    }
    h.finish()
}

fn sympl_action_nondegenerate(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("sympl-action-nondegenerate", seed, scale);
    let mut rng = h.rng();
    for k in 0..scale.pick(100, 300) {
        let p = if k % 2 == 0 { 2usize } else { 3 };
        let root = if p == 2 {
            ColoredSquare::from_binary_tuple(&fixtures::random_strict_tuple(&mut rng, 2, 2))
                .unwrap()
        } else {
            fixtures::random_strict_colored_square(&mut rng, p, 1)
        };
        let parts: Vec<AlmostSymplectic> = (0..root.arity())
            .map(|_| symplectic::random_omega(&mut rng, p, 1, false))
            .collect();
        let ok = symplectic::algebra_action(&root, &parts)
            .map(|w| w.is_nondegenerate())
            .unwrap_or(false);
        h.case(0.0, ok, || {
            (
                format!("p={p}, arity {}", root.arity()),
                "degenerate".into(),
                "non-degenerate".into(),
            )
        });
    }
    h.finish()
}

fn sympl_action_compatibility(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("sympl-action-compatibility", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(6, 20) {
        let c = fixtures::random_strict_colored_square(&mut rng, 3, 1);
        let cp = fixtures::random_strict_colored_square(&mut rng, 3, 1);
        let n = c.arity();
        let m = cp.arity();
        let i = 1 + rng.gen_range(0..n);
        let outer_parts: Vec<AlmostSymplectic> = (0..n - 1)
            .map(|_| symplectic::random_omega(&mut rng, 3, 1, false))
            .collect();
        let inner_parts: Vec<AlmostSymplectic> = (0..m)
            .map(|_| symplectic::random_omega(&mut rng, 3, 1, false))
            .collect();
        let composed_square = c.compose(i, &cp).unwrap();
        let mut lhs_parts = Vec::new();
        lhs_parts.extend_from_slice(&outer_parts[..i - 1]);
        lhs_parts.extend(inner_parts.iter().cloned());
        lhs_parts.extend_from_slice(&outer_parts[i - 1..]);
        let lhs = symplectic::algebra_action(&composed_square, &lhs_parts).unwrap();
        let inner = symplectic::algebra_action(&cp, &inner_parts).unwrap();
        let mut rhs_parts = Vec::new();
        rhs_parts.extend_from_slice(&outer_parts[..i - 1]);
        rhs_parts.push(inner);
        rhs_parts.extend_from_slice(&outer_parts[i - 1..]);
        let rhs = symplectic::algebra_action(&c, &rhs_parts).unwrap();
        let n_max = lhs.exponent().max(rhs.exponent());
        let side = 3usize.pow(n_max);
        let mut equal = true;
        for r in 0..side {
            for col in 0..side {
                let fa = side / lhs.dim();
                let fb = side / rhs.dim();
                if lhs.value(r / fa, col / fa) != rhs.value(r / fb, col / fb) {
                    equal = false;
                }
            }
        }
        h.case(0.0, equal, || {
            (
                format!("slot {i}"),
                "cell mismatch".into(),
                "identical colorings".into(),
            )
        });
    }
    h.finish()
}

fn sympl_loop_cancellative(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("sympl-loop-cancellative", seed, scale);
    let mut rng = h.rng();
    for k in 0..scale.pick(30, 100) {
        if k % 3 == 2 {
            // characteristic 2 through a polarization
            let side = 4usize;
            let mut table = vec![vec![0u32; side]; side];
            for u in 0..side {
                for v in (u + 1)..side {
                    let val = 2 * rng.gen_range(0..2u32);
                    table[u][v] = val;
                    table[v][u] = val;
                }
            }
            let omega = AlmostSymplectic::new_unchecked(2, 2, table).unwrap();
            let beta = symplectic::polarization_from_omega(&omega).unwrap();
            let ext = symplectic::loop_from_beta(2, &beta).unwrap();
            h.case(0.0, ext.magma().is_quasigroup(), || {
                (
                    "polarization extension".into(),
                    "not cancellative".into(),
                    "quasigroup".into(),
                )
            });
        } else {
            let p = if k % 3 == 0 { 3usize } else { 5 };
            let omega = symplectic::random_omega(&mut rng, p, 1, false);
            let ext = symplectic::loop_from_omega(&omega).unwrap();
            h.case(0.0, ext.magma().is_quasigroup(), || {
                (
                    format!("p={p}"),
                    "not cancellative".into(),
                    "quasigroup".into(),
                )
            });
        }
    }
    h.finish()
}

fn sympl_nonassoc_coboundary(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("sympl-nonassoc-coboundary", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(30, 100) {
        let omega = symplectic::random_omega(&mut rng, 3, 1, false);
        let ext = symplectic::loop_from_omega(&omega).unwrap();
        let equiv = ext.nonassoc_witness().is_some() == omega.coboundary_witness().is_some();
        h.case(0.0, equiv, || {
            (
                "halved-coboundary equivalence".into(),
                format!(
                    "witness {:?} vs coboundary {:?}",
                    ext.nonassoc_witness(),
                    omega.coboundary_witness()
                ),
                "both or neither".into(),
            )
        });
    }
    h.finish()
}

// ---- loops ----------------------------------------------------------

fn two_determine_third(m: &FiniteMagma) -> bool {
    let s = m.size();
    for a in 0..s {
        for target in 0..s {
            if (0..s).filter(|&b| m.op(a, b) == target).count() != 1 {
                return false;
            }
            if (0..s).filter(|&b| m.op(b, a) == target).count() != 1 {
                return false;
            }
        }
    }
    true
}

fn loops_quasigroup_oracle(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("loops-quasigroup-oracle", seed, scale);
    // exhaustive scan at orders 1..3
    for s in 1..=3usize {
        let cells = s * s;
        let total = s.pow(cells as u32);
        for code in 0..total {
            let mut c = code;
            let mut table = vec![vec![0usize; s]; s];
            for r in 0..s {
                for col in 0..s {
                    table[r][col] = c % s;
                    c /= s;
                }
            }
            let m = FiniteMagma::new(table).unwrap();
            let agree = m.is_quasigroup() == two_determine_third(&m);
            h.case(0.0, agree, || {
                (
                    format!("order {s} code {code}"),
                    "disagree".into(),
                    "agree".into(),
                )
            });
        }
    }
    // random order-4 tables
    let mut rng = h.rng();
    for _ in 0..scale.pick(200, 800) {
        let table: Vec<Vec<usize>> = (0..4)
            .map(|_| (0..4).map(|_| rng.gen_range(0..4usize)).collect())
            .collect();
        let m = FiniteMagma::new(table).unwrap();
        let agree = m.is_quasigroup() == two_determine_third(&m);
        h.case(0.0, agree, || {
            (
                "random order-4 table".into(),
                "disagree".into(),
                "agree".into(),
            )
        });
    }
    h.finish()
}

fn loops_design_coverage(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("loops-design-coverage", seed, scale);
    let cases: Vec<FiniteMagma> = vec![
        FiniteMagma::cyclic(1),
        FiniteMagma::cyclic(2),
        FiniteMagma::cyclic(3),
        FiniteMagma::cyclic(4),
        fixtures::nonassociative_loop_order5(),
    ];
    for m in cases {
        let s = m.size();
        let d = loops::design_from_loop(&m).unwrap();
        let counts_ok = d.point_count() == 3 * s && d.lines().len() == s * s;
        let mut unique = true;
        for x1 in 0..s {
            for x2 in 0..s {
                unique &= d.pair_multiplicity(x1, x2) == 1;
            }
        }
        h.case(0.0, counts_ok && unique, || {
            (
                format!("order {s}"),
                format!("{} lines", d.lines().len()),
                format!("{}", s * s),
            )
        });
    }
    h.finish()
}

fn loops_design_graph(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("loops-design-graph", seed, scale);
    let empty = loops::design_graph(&loops::LatinDesign::empty());
    h.case(
        0.0,
        empty.vertex_count() == 0 && empty.flag_count() == 0,
        || {
            (
                "empty design".into(),
                "nonempty graph".into(),
                "empty graph".into(),
            )
        },
    );
    for s in 1..=4usize {
        let d = loops::design_from_loop(&FiniteMagma::cyclic(s)).unwrap();
        let g = loops::design_graph(&d);
        let flags_ok = g.flag_count() == 3 * d.lines().len();
        let fibers_ok = (0..g.vertex_count()).all(|l| g.fiber(l).len() == 3);
        let involution_ok = (0..g.flag_count()).all(|f| g.involution(g.involution(f)) == f);
        h.case(0.0, flags_ok && fibers_ok && involution_ok, || {
            (
                format!("order {s}"),
                format!("{} flags", g.flag_count()),
                format!("{}", 3 * d.lines().len()),
            )
        });
    }
    h.finish()
}

fn loops_moufang_predicates(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("loops-moufang-predicates", seed, scale);
    for n in 1..=6usize {
        let g = FiniteMagma::cyclic(n);
        h.case(
            0.0,
            g.is_quasigroup() && g.is_loop() && g.is_moufang(),
            || {
                (
                    format!("cyclic group {n}"),
                    "predicate failed".into(),
                    "Moufang loop".into(),
                )
            },
        );
    }
    let shear = FiniteMagma::from_fn(5, |a, b| (a + 2 * b) % 5).unwrap();
    h.case(0.0, shear.is_quasigroup() && !shear.is_loop(), || {
        (
            "affine shear".into(),
            "unexpected identity".into(),
            "quasigroup, not loop".into(),
        )
    });
    let l5 = fixtures::nonassociative_loop_order5();
    let ok = l5.is_loop() && !l5.is_moufang() && l5.moufang_witness().is_some();
    h.case(0.0, ok, || {
        (
            "order-5 loop".into(),
            "predicates".into(),
            "loop, non-Moufang, witness".into(),
        )
    });
    h.finish()
}

// ---- codes ----------------------------------------------------------

fn codes_s1_commutativity(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("codes-s1-commutativity", seed, scale);
    for omega in [codes::commuting_fixture_p3(), codes::commuting_fixture_p5()] {
        let p = omega.p();
        let alg = codes::LoopAlgebra::from_omega(&omega).unwrap();
        for k in 0..p {
            for &(u, v) in &codes::symmetric_zero_pairs(&omega) {
                let eu = alg.e_operator(k, u).unwrap();
                let ev = alg.e_operator(k, v).unwrap();
                let norm = eu.mul(&ev).sub(&ev.mul(&eu)).frobenius_norm();
                h.case(1e-12, norm < 1e-12, || {
                    (
                        format!("p={p} k={k} pair ({u},{v})"),
                        format!("{norm:.3e}"),
                        "< 1e-12".into(),
                    )
                });
            }
        }
        // recorded witness outside the pair set
        let eu = alg.e_operator(1, 0).unwrap();
        let ev = alg.e_operator(1, 1).unwrap();
        let outside = !codes::in_pair_set(&omega, 0, 1);
        let norm = eu.mul(&ev).sub(&ev.mul(&eu)).frobenius_norm();
        h.case(1e-3, outside && norm > 1e-3, || {
            (
                format!("p={p} witness (0,1)"),
                format!("{norm:.3e}"),
                "> 1e-3".into(),
            )
        });
    }
    h.finish()
}

fn codes_relabel_invariance(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("codes-relabel-invariance", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(10, 30) {
        let omega = codes::commuting_fixture_p3();
        let alg = codes::LoopAlgebra::from_omega(&omega).unwrap();
        let k = rng.gen_range(0..3usize);
        let tuple = vec![1usize, 2];
        let l1 = alg.e_spectrum(k, 1).unwrap()[rng.gen_range(0..3)];
        let l2 = alg.e_spectrum(k, 2).unwrap()[rng.gen_range(0..3)];
        let base = codes::code_space(&alg, &omega, k, &tuple, &[l1, l2]).unwrap();

        let pi = fixtures::random_permutation(&mut rng, 3);
        let vdim = 3usize;
        let relabel = |a: usize| (a / vdim) * vdim + pi.apply(a % vdim);
        let size = alg.dim();
        let lt = symplectic::loop_from_omega(&omega).unwrap();
        let mut table = vec![vec![0usize; size]; size];
        for a in 0..size {
            for b in 0..size {
                table[relabel(a)][relabel(b)] = relabel(lt.magma().op(a, b));
            }
        }
        let conj = codes::LoopAlgebra::from_magma(3, 3, FiniteMagma::new(table).unwrap()).unwrap();
        let mut omega2 = vec![vec![0u32; 3]; 3];
        for u in 0..3 {
            for v in 0..3 {
                omega2[pi.apply(u)][pi.apply(v)] = omega.value(u, v);
            }
        }
        let omega2 = AlmostSymplectic::new(3, 1, omega2).unwrap();
        let tuple2: Vec<usize> = tuple.iter().map(|&u| pi.apply(u)).collect();
        let moved = codes::code_space(&conj, &omega2, k, &tuple2, &[l1, l2]).unwrap();
        h.case(0.0, base.dimension() == moved.dimension(), || {
            (
                format!("k={k}"),
                format!("{}", moved.dimension()),
                format!("{}", base.dimension()),
            )
        });
    }
    h.finish()
}

fn codes_partial_action(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("codes-partial-action", seed, scale);
    let mut rng = h.rng();
    let table = vec![vec![0usize, 0, 1], vec![1, 2, 2], vec![2, 1, 1]];
    let root = ColoredSquare::from_cell_table(3, 1, &table).unwrap();
    for _ in 0..scale.pick(20, 60) {
        let omega_a = if rng.gen_bool(0.5) {
            codes::commuting_fixture_p3()
        } else {
            symplectic::random_omega(&mut rng, 3, 1, false)
        };
        let omega_b = symplectic::random_omega(&mut rng, 3, 1, false);
        let ta = vec![rng.gen_range(0..3usize)];
        let tb = vec![rng.gen_range(0..3usize)];
        let data = vec![(omega_a.clone(), ta.clone()), (omega_b.clone(), tb.clone())];
        let out = codes::partial_action(&root, &data).unwrap();
        // independent re-verification of the decision
        let composed = symplectic::algebra_action_full(&root, &[omega_a, omega_b]).unwrap();
        let embedded = vec![
            composed.embed(0, ta[0]).unwrap(),
            composed.embed(1, tb[0]).unwrap(),
        ];
        let expected = codes::in_s_set(&composed.omega, &embedded);
        h.case(0.0, out.is_accepted() == expected, || {
            (
                format!("tuples {ta:?} {tb:?}"),
                format!("{}", out.is_accepted()),
                format!("{expected}"),
            )
        });
        if let codes::PartialActionOutcome::Accepted(code) = &out {
            // accepted composites feed the code pipeline
            let alg = codes::LoopAlgebra::from_omega(&code.omega).unwrap();
            let lambda: Vec<Complex64> = code
                .tuple
                .iter()
                .map(|&u| alg.e_spectrum(1, u).unwrap()[0])
                .collect();
            let cs = codes::code_space(&alg, &code.omega, 1, &code.tuple, &lambda);
            let ok = cs
                .map(|c| c.residuals.iter().all(|&r| r <= codes::RESIDUAL_TOL))
                .unwrap_or(false);
            h.case(1e-10, ok, || {
                (
                    "accepted composite pipeline".into(),
                    "residuals".into(),
                    "<= 1e-10".into(),
                )
            });
        }
    }
    h.finish()
}

fn codes_chi_decomposition(seed: u64, scale: Scale) -> SuiteReport {
    let mut h = Harness::new("codes-chi-decomposition", seed, scale);
    let mut rng = h.rng();
    for _ in 0..scale.pick(10, 30) {
        let omega = symplectic::random_omega(&mut rng, 3, 1, false);
        let alg = codes::LoopAlgebra::from_omega(&omega).unwrap();
        let mut total = 0;
        let mut stacked = CMatrix::zeros(alg.dim(), alg.dim());
        let mut col = 0;
        for k in 0..alg.p() {
            let b = alg.chi_subspace(k).unwrap();
            total += b.cols();
            for w in 0..b.cols() {
                for r in 0..alg.dim() {
                    stacked.set(r, col + w, b.get(r, w));
                }
            }
            col += b.cols();
        }
        let unitary = stacked
            .adjoint()
            .mul(&stacked)
            .max_abs_diff(&CMatrix::identity(alg.dim()));
        h.case(1e-12, total == alg.dim() && unitary <= 1e-12, || {
            (
                "character decomposition".into(),
                format!("total {total}, unitary drift {unitary:.3e}"),
                format!("{}", alg.dim()),
            )
        });
    }
    h.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique_and_runnable() {
        let reg = registry();
        let mut ids: Vec<&str> = reg.iter().map(|s| s.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), reg.len());
        assert!(run_suite("no-such-suite", 0, Scale::Small).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("prob-associativity", 42, Scale::Small).unwrap();
        let b = run_suite("prob-associativity", 42, Scale::Small).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        // wall time never reaches the payload
        assert!(!serde_json::to_string(&a).unwrap().contains("wall"));
    }

    #[test]
    fn every_suite_passes_at_small_scale() {
        for def in registry() {
            let report = run_suite(def.id, 7, Scale::Small).unwrap();
            assert!(
                report.passed(),
                "{} ({} cases): {:?}",
                def.id,
                report.cases,
                report.failures.first()
            );
        }
    }
}
