//! The full pipeline on one tuple: skeleton, Cartan graph and Nichols
//! algebra, with the three finiteness verdicts compared against each other.

use crate::cartan::{explore, rank3_catalog_match, ExploreCaps, ExploreStatus, GeneralizedCartanMatrix, Rank3Case, Root};
use crate::nichols::{
    hilbert_oracle_crosscheck, nichols_dimension, rank_one_hilbert, root_factors, CrosscheckReport, HilbertSeries,
    NicholsDimension, NicholsError, DEFAULT_ORACLE_DEGREE, DEFAULT_RANK_ONE_DEGREE,
};
use crate::scalars::height;
use crate::ydmod::{braid_components, cartan_matrix, YDTuple, TENSOR_BUDGET};

use super::{classify_skeleton, extract_skeleton, Skeleton, SkeletonError, SkeletonType};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyCaps {
    pub explore: ExploreCaps,
    /// Total degree of the oracle cross-check; lowered to fit the tensor budget.
    pub oracle_degree: u32,
    /// Degrees tried before a rank-one factor is declared non-terminating.
    pub rank_one_degree: u32,
}

impl Default for ClassifyCaps {
    fn default() -> Self {
        ClassifyCaps {
            explore: ExploreCaps::default(),
            oracle_degree: DEFAULT_ORACLE_DEGREE,
            rank_one_degree: DEFAULT_RANK_ONE_DEGREE,
        }
    }
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evidence {
    /// Exact computation that needs no cap, e.g. matching the catalog.
    ProvedByClosedForm,
    /// Exact computation that finished inside the caps.
    VerifiedUpToCap,
    /// A cap was hit before a decision.
    CapReached,
    /// Nothing was computed.
    NotApplicable,
}

impl std::fmt::Display for Evidence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Evidence::ProvedByClosedForm => "proved-by-closed-form",
            Evidence::VerifiedUpToCap => "verified-up-to-cap",
            Evidence::CapReached => "cap-reached",
            Evidence::NotApplicable => "not-applicable",
        })
    }
}

/// `finite` is `None` when undecided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub finite: Option<bool>,
    pub evidence: Evidence,
    pub detail: String,
}

impl Verdict {
    fn decided(finite: bool, evidence: Evidence, detail: impl Into<String>) -> Self {
        Verdict {
            finite: Some(finite),
            evidence,
            detail: detail.into(),
        }
    }

    fn open(evidence: Evidence, detail: impl Into<String>) -> Self {
        Verdict {
            finite: None,
            evidence,
            detail: detail.into(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self.finite {
            Some(true) => "finite",
            Some(false) => "infinite",
            None => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    pub status: String,
    pub objects: usize,
    pub reduced_objects: Option<usize>,
    pub positive_roots: Option<usize>,
    pub standard: bool,
    pub rank3_case: Option<Rank3Case>,
    /// Positive roots at the object of the input tuple, sorted by height.
    pub roots: Vec<Root>,
}

#[derive(Debug, Clone)]
pub struct TupleReport {
    pub rank: usize,
    pub characteristic: u32,
    pub group_order: usize,
    pub support_generates: bool,
    pub braid_components: Vec<Vec<usize>>,
    pub cartan: Result<GeneralizedCartanMatrix, String>,
    pub skeleton: Result<Skeleton, String>,
    pub skeleton_type: SkeletonType,
    pub graph: GraphStats,
    pub hilbert: Option<HilbertSeries>,
    pub dimension: Option<NicholsDimension>,
    pub crosscheck: Option<CrosscheckReport>,
    pub skeleton_verdict: Verdict,
    pub groupoid_verdict: Verdict,
    pub nichols_verdict: Verdict,
    /// Whether the three verdicts were compared; needs rank at least three,
    /// a non-abelian group, a generating support and a braid-indecomposable
    /// tuple.
    pub triangle_applies: bool,
    pub inconsistency: Option<String>,
    pub warnings: Vec<String>,
}

impl TupleReport {
    pub fn braid_indecomposable(&self) -> bool {
        self.braid_components.len() <= 1
    }

    /// Overall verdict: decided values must agree, undecided ones are skipped.
    pub fn finite(&self) -> Option<bool> {
        [&self.groupoid_verdict, &self.nichols_verdict, &self.skeleton_verdict]
            .iter()
            .find_map(|v| v.finite)
    }
}

/// Only a catalog match decides finiteness below rank three; the absence of
/// one says nothing there.
fn skeleton_verdict(skeleton: &Result<Skeleton, SkeletonError>, ty: SkeletonType, theta: usize) -> Verdict {
    match skeleton {
        Ok(_) if ty.is_finite() => Verdict::decided(true, Evidence::ProvedByClosedForm, format!("skeleton of type {ty}")),
        Ok(_) | Err(SkeletonError::NoSkeleton(_)) if theta < 3 => {
            Verdict::open(Evidence::NotApplicable, "no finite-type skeleton; the catalog is complete only from rank three")
        }
        Ok(_) => Verdict::decided(false, Evidence::ProvedByClosedForm, "skeleton matches no finite type"),
        Err(SkeletonError::ExceedsCap(i, j)) => Verdict::open(
            Evidence::CapReached,
            format!("Cartan entry ({},{}) beyond the adjoint cap", i + 1, j + 1),
        ),
        Err(SkeletonError::NoSkeleton(why)) => Verdict::decided(false, Evidence::ProvedByClosedForm, format!("no skeleton: {why}")),
        Err(e) => Verdict::open(Evidence::NotApplicable, e.to_string()),
    }
}

fn largest_oracle_degree(m: &YDTuple, wanted: u32) -> u32 {
    let dim: usize = m.modules().iter().map(|v| v.dim()).sum();
    let mut d = 0;
    while d < wanted && dim.checked_pow(d + 1).is_some_and(|c| c <= TENSOR_BUDGET) {
        d += 1;
    }
    d
}

/// Runs skeleton extraction, Cartan graph exploration and the Nichols
/// computation on `m` and compares the three finiteness verdicts.
pub fn classify_tuple(m: &YDTuple, caps: ClassifyCaps) -> Result<TupleReport, SkeletonError> {
    let adj = caps.explore.adjoint_cap;
    let ch = m.characteristic();
    let mut warnings = Vec::new();
    let support_generates = m.support_generates();
    if !support_generates {
        warnings.push("supports do not generate the group".to_string());
    }
    let comps = braid_components(m);
    if comps.len() > 1 {
        let shown: Vec<String> = comps
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        warnings.push(format!("decomposable: braid components {}", shown.join(" ")));
    }
    let cartan = match cartan_matrix(m, adj)? {
        Ok(a) => Ok(a),
        Err((i, j)) => Err(format!("entry ({},{}) exceeds the adjoint cap {adj}", i + 1, j + 1)),
    };

    let extracted = extract_skeleton(m, adj);
    let skeleton_type = match &extracted {
        Ok(s) => classify_skeleton(s, ch),
        Err(_) => SkeletonType::None,
    };
    let mut skeleton_verdict = skeleton_verdict(&extracted, skeleton_type, m.rank());
    let skeleton = extracted.map_err(|e| e.to_string());

    let ex = explore(m, caps.explore)?;
    let x = ex.class_of.first().copied().unwrap_or(0);
    let root_set = ex.root_set(x);
    let rank3_case = match (&ex.reduced, m.rank()) {
        (Some(g), 3) if ex.flags.is_finite && ex.flags.is_indecomposable && g.is_connected() => {
            rank3_catalog_match(g).ok().map(|(c, _, _)| c)
        }
        _ => None,
    };
    let status = match &ex.status {
        ExploreStatus::Complete => "complete".to_string(),
        ExploreStatus::ObjectCap => format!("object cap {} reached", caps.explore.max_objects),
        ExploreStatus::RootCap => format!("root cap {} reached", caps.explore.max_roots),
        ExploreStatus::ReflectionFailed { object, index, reason } => {
            format!("reflection {} at object {object} failed: {reason}", index + 1)
        }
    };
    let graph = GraphStats {
        status: status.clone(),
        objects: ex.objects_seen,
        reduced_objects: ex.reduced.as_ref().map(|g| g.num_objects()),
        positive_roots: root_set.as_ref().map(|r| r.positive.len()),
        standard: ex.flags.is_standard,
        rank3_case,
        roots: root_set.map(|r| r.positive).unwrap_or_default(),
    };
    let groupoid_verdict = match &ex.status {
        ExploreStatus::Complete if ex.flags.is_finite => Verdict::decided(
            true,
            Evidence::VerifiedUpToCap,
            format!(
                "{} objects, {} positive roots, root axioms hold",
                ex.objects_seen,
                graph.positive_roots.unwrap_or(0)
            ),
        ),
        ExploreStatus::Complete if ex.full.is_some() => Verdict::decided(
            false,
            Evidence::VerifiedUpToCap,
            format!("closed graph fails the axioms: {}", ex.diagnostics.join("; ")),
        ),
        ExploreStatus::Complete => Verdict::open(Evidence::NotApplicable, ex.diagnostics.join("; ")),
        _ => Verdict::open(Evidence::CapReached, status),
    };

    let mut hilbert = None;
    let mut dimension = None;
    let mut crosscheck = None;
    let nichols_verdict = if ex.flags.is_finite {
        match root_factors(&ex, caps.rank_one_degree) {
            Ok(fs) => {
                let mut h = HilbertSeries::one(m.rank());
                for f in &fs {
                    let alpha: Vec<u32> = f.beta.iter().map(|&b| b as u32).collect();
                    h = h.mul(&HilbertSeries::substitute(&f.series, &alpha));
                }
                let d = largest_oracle_degree(m, caps.oracle_degree);
                let cc = match hilbert_oracle_crosscheck(m, &h, d) {
                    Ok(c) => Some(c),
                    Err(e) => {
                        warnings.push(format!("oracle cross-check skipped: {e}"));
                        None
                    }
                };
                let total = h.total();
                if cc.as_ref().is_some_and(|c| !c.ok()) {
                    warnings.push("oracle cross-check disagrees with the product series".into());
                }
                let detail = format!(
                    "product over {} positive roots; oracle cross-check to degree {d}: {}",
                    fs.len(),
                    match &cc {
                        Some(c) if c.ok() => "match",
                        Some(_) => "MISMATCH",
                        None => "skipped",
                    }
                );
                hilbert = Some(h);
                dimension = Some(NicholsDimension::Finite(total));
                crosscheck = cc;
                Verdict::decided(true, Evidence::VerifiedUpToCap, detail)
            }
            Err(NicholsError::RootModule { beta, reason }) if reason.contains("no vanishing degree") => {
                let why = format!("root module at {beta:?} does not terminate by degree {}", caps.rank_one_degree);
                dimension = Some(NicholsDimension::Infinite(why.clone()));
                Verdict::open(Evidence::CapReached, why)
            }
            Err(e) => Verdict::open(Evidence::NotApplicable, e.to_string()),
        }
    } else {
        // Each simple summand generates a braided subalgebra of the whole.
        let mut verdict = Verdict::open(Evidence::NotApplicable, "Cartan graph not known to be finite");
        for (i, v) in m.modules().iter().enumerate() {
            if v.dim() == 1 {
                let (s, chi) = v.simple_data()?;
                if height(chi.value(s), ch).is_none() {
                    let why = format!("module {} has infinite height", i + 1);
                    dimension = Some(NicholsDimension::Infinite(why.clone()));
                    verdict = Verdict::decided(false, Evidence::ProvedByClosedForm, why);
                    break;
                }
            } else if let Err(NicholsError::NoTermination(d)) = rank_one_hilbert(v, caps.rank_one_degree, ch) {
                let why = format!("module {} alone has no vanishing degree up to {d}", i + 1);
                dimension = Some(NicholsDimension::Infinite(why.clone()));
                verdict = Verdict::open(Evidence::CapReached, why);
                break;
            }
        }
        if dimension.is_none() && ex.full.is_some() {
            if let Ok(NicholsDimension::Infinite(why)) = nichols_dimension(&ex, caps.rank_one_degree) {
                dimension = Some(NicholsDimension::Infinite(why));
            }
        }
        verdict
    };

    let abelian = m.group().center().order() == m.group().order();
    let triangle_applies = m.rank() >= 3 && !abelian && support_generates && comps.len() <= 1;
    // Without the structure theorem a missing catalog match proves nothing.
    if !triangle_applies && skeleton_verdict.finite == Some(false) {
        skeleton_verdict = Verdict::open(
            Evidence::NotApplicable,
            format!("{}; the structure theorem needs a non-abelian group, generating support and one braid component", skeleton_verdict.detail),
        );
    }
    let inconsistency = if triangle_applies {
        let named = [
            ("skeleton", &skeleton_verdict),
            ("groupoid", &groupoid_verdict),
            ("nichols", &nichols_verdict),
        ];
        let decided: Vec<_> = named.iter().filter_map(|(n, v)| v.finite.map(|f| (*n, f))).collect();
        (decided.iter().any(|&(_, f)| f != decided[0].1)).then(|| {
            decided
                .iter()
                .map(|(n, f)| format!("{n}={}", if *f { "finite" } else { "infinite" }))
                .collect::<Vec<_>>()
                .join(", ")
        })
    } else {
        None
    };

    Ok(TupleReport {
        rank: m.rank(),
        characteristic: ch.p(),
        group_order: m.group().order(),
        support_generates,
        braid_components: comps,
        cartan,
        skeleton,
        skeleton_type,
        graph,
        hilbert,
        dimension,
        crosscheck,
        skeleton_verdict,
        groupoid_verdict,
        nichols_verdict,
        triangle_applies,
        inconsistency,
        warnings,
    })
}
