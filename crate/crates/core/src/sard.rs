//! The ordered Sard pipeline: cut by `f_1 = c_1`, extend `f_2` to the
//! resulting graph, cut again, and so on.
//!
//! A vertex of stage `i` is a simplex of stage `i-1`, which in turn is a set
//! of simplices further up. Its support is the multiset of original vertices
//! obtained by flattening this nesting, and extended functions average the
//! original values over that multiset.

use crate::error::{Error, Result};
use crate::graph::{SimplicialGraph, Vertex};
use crate::levelset::{self, LevelSurfaceGraph};
use crate::rational::{self, Rational, VertexFunction};
use crate::topology::{self, VerificationReport};

#[derive(Clone, Debug)]
pub struct SardStage {
    /// Position of the constraint in the input order.
    pub function_index: usize,
    pub level: Rational,
    /// The extension of `f_i` to the previous stage's graph.
    pub extended: VertexFunction,
    /// Range of `extended`: the levels this stage cannot use.
    pub excluded_values: Vec<Rational>,
    pub surface: LevelSurfaceGraph,
    /// Flattened original-vertex multiset of every vertex of `surface`.
    pub support: Vec<Vec<Vertex>>,
    /// Whether `surface` verifies as a `(d - i)`-graph.
    pub verification: VerificationReport,
}

#[derive(Clone, Debug)]
pub struct SardTrace {
    pub dimension: usize,
    pub stages: Vec<SardStage>,
}

impl SardTrace {
    /// Always `"flattened_multiset_mean"`; kept so exported traces name the
    /// extension rule.
    pub const EXTENSION_RULE: &'static str = "flattened_multiset_mean";

    pub fn final_graph(&self) -> &SimplicialGraph {
        &self.stages.last().expect("pipelines have at least one stage").surface.graph
    }

    pub fn all_verified(&self) -> bool {
        self.stages.iter().all(|s| s.verification.is_yes())
    }
}

pub fn sard_pipeline(g: &SimplicialGraph, fs: &[VertexFunction], cs: &[Rational], budget: u64) -> Result<SardTrace> {
    if fs.len() != cs.len() {
        return Err(Error::InvalidParameters(format!("{} functions but {} levels", fs.len(), cs.len())));
    }
    sard_pipeline_with(g, fs, |stage, _| cs[stage - 1].clone(), budget)
}

/// Runs the pipeline, asking `choose_level(stage, excluded_values)` for the
/// level of each stage.
pub fn sard_pipeline_with(
    g: &SimplicialGraph,
    fs: &[VertexFunction],
    mut choose_level: impl FnMut(usize, &[Rational]) -> Rational,
    budget: u64,
) -> Result<SardTrace> {
    let d = g.dimension().unwrap_or(0);
    if fs.is_empty() || fs.len() > d {
        return Err(Error::DimensionExceeded { constraints: fs.len(), dim: d });
    }
    let mut current = g.clone();
    let mut support: Vec<Vec<Vertex>> = g.vertices().map(|v| vec![v]).collect();
    let mut stages: Vec<SardStage> = Vec::with_capacity(fs.len());
    for (i, f) in fs.iter().enumerate() {
        let stage = i + 1;
        let extended = extend_over_support(f, &support)?;
        if extended.is_constant() {
            return Err(Error::ConstantExtension { stage });
        }
        let excluded_values = extended.range();
        let level = choose_level(stage, &excluded_values);
        if excluded_values.binary_search(&level).is_ok() {
            return Err(Error::IncompatibleLevel { stage, value: level });
        }
        let surface = levelset::level_surface(&current, &extended, &level)?;
        if surface.is_empty() {
            return Err(Error::EmptyStage { stage });
        }
        let next_support: Vec<Vec<Vertex>> = surface
            .origin
            .iter()
            .map(|s| s.vertices().iter().flat_map(|&v| support[v as usize].iter().copied()).collect())
            .collect();
        let verification = topology::is_dgraph(&surface.graph, d as i64 - stage as i64, budget);
        current = surface.graph.clone();
        support = next_support;
        stages.push(SardStage {
            function_index: i,
            level,
            extended,
            excluded_values,
            surface,
            support: support.clone(),
            verification,
        });
    }
    Ok(SardTrace { dimension: d, stages })
}

fn extend_over_support(f: &VertexFunction, support: &[Vec<Vertex>]) -> Result<VertexFunction> {
    support
        .iter()
        .map(|s| {
            let vals = s.iter().map(|&v| f.get(v)).collect::<Result<Vec<_>>>()?;
            Ok(rational::mean(vals).expect("supports are nonempty"))
        })
        .collect::<Result<Vec<_>>>()
        .map(VertexFunction::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::{int, ratio};
    use crate::topology::DEFAULT_BUDGET;

    fn labels_of(trace: &SardTrace, stage: usize) -> Vec<String> {
        let mut l: Vec<String> = trace.stages[stage].surface.graph.labels().unwrap().to_vec();
        l.sort();
        l
    }

    #[test]
    fn worked_octahedron_example() {
        let g = catalog::octahedron_polar();
        let f = VertexFunction::from_ints(&[13, 15, 17, 19, 1, 31]);
        let trace = sard_pipeline(&g, &[f.clone(), f], &[int(2), ratio(17, 2)], DEFAULT_BUDGET).unwrap();
        let first = &trace.stages[0];
        assert_eq!(first.surface.component_sizes(), vec![8]);
        assert_eq!(
            labels_of(&trace, 0),
            ["(1,5)", "(1,2,5)", "(2,5)", "(2,3,5)", "(3,5)", "(3,4,5)", "(4,5)", "(1,4,5)"]
                .iter()
                .map(|s| s.to_string())
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect::<Vec<_>>()
        );
        let second = &trace.stages[1];
        let mut ext = second.extended.values().to_vec();
        ext.sort();
        let mut expected = vec![int(7), int(8), int(9), int(10), ratio(29, 3), int(11), ratio(37, 3), int(11)];
        expected.sort();
        assert_eq!(ext, expected);
        assert_eq!(second.surface.graph.vertex_count(), 4);
        assert_eq!(second.surface.graph.edge_count(), 0);
        assert!(trace.all_verified());
    }

    #[test]
    fn level_on_an_extended_value_is_incompatible() {
        let g = catalog::octahedron_polar();
        let f = VertexFunction::from_ints(&[13, 15, 17, 19, 1, 31]);
        let err = sard_pipeline(&g, &[f.clone(), f], &[int(2), int(9)], DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, Error::IncompatibleLevel { stage: 2, .. }));
    }

    #[test]
    fn eigenvector_pair_hits_zero_in_both_orders() {
        let g = catalog::octahedron_mirrored();
        let f2 = VertexFunction::from_ints(&[-1, -2, -3, 3, 2, 1]);
        let f3 = VertexFunction::from_ints(&[1, 2, -3, -3, 2, 1]);
        // Every mixed triangle {a, b, c} of the octahedron carries f3 mean
        // (1 + 2 - 3) / 3 = 0, so 0 is an extended value in either order.
        for order in [[f2.clone(), f3.clone()], [f3, f2]] {
            let r = sard_pipeline(&g, &order, &[int(0), int(0)], DEFAULT_BUDGET);
            assert!(matches!(r, Err(Error::IncompatibleLevel { stage: 2, .. })));
        }
    }

    #[test]
    fn supports_flatten_through_stages() {
        let g = catalog::cross_polytope(3).unwrap();
        let f = VertexFunction::from_ints(&[5, -2, 7, 1, -4, 3, 0, 6]);
        let h = VertexFunction::from_ints(&[2, 9, -5, 4, -1, 8, -7, 3]);
        let trace = sard_pipeline(&g, &[f, h.clone()], &[ratio(1, 2), ratio(1, 3)], DEFAULT_BUDGET).unwrap();
        let second = &trace.stages[1];
        for (v, s) in second.support.iter().enumerate() {
            let origin = &second.surface.origin[v];
            let expected: usize = origin.vertices().iter().map(|&u| trace.stages[0].support[u as usize].len()).sum();
            assert_eq!(s.len(), expected);
        }
        assert!(second.excluded_values.len() <= trace.stages[0].surface.graph.vertex_count());
    }

    #[test]
    fn constant_function_is_rejected() {
        let g = catalog::cross_polytope(2).unwrap();
        let f = VertexFunction::constant(6, int(3));
        assert!(matches!(
            sard_pipeline(&g, &[f], &[int(1)], DEFAULT_BUDGET),
            Err(Error::ConstantExtension { stage: 1 })
        ));
    }

    #[test]
    fn out_of_range_level_gives_empty_stage() {
        let g = catalog::cross_polytope(2).unwrap();
        let f = VertexFunction::from_ints(&[1, 2, 3, 4, 5, 6]);
        assert!(matches!(sard_pipeline(&g, &[f], &[int(10)], DEFAULT_BUDGET), Err(Error::EmptyStage { stage: 1 })));
    }
}
