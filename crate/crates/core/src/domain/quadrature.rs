use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One weighted node of a boundary rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct BoundaryNode {
    pub point: Complex64,
    pub weight: f64,
    pub tangent: Complex64,
}

/// Arclength quadrature on ∂Ω. Tangents are unit and positively oriented with
/// respect to Ω (outer boundary counterclockwise, holes clockwise), so
/// `tangent * weight` is the `dz` of a contour integral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
    pub tangents: Vec<Complex64>,
    /// Boundary component of each node: 0 is the outer curve, `i + 1` hole `i`.
    pub component: Vec<usize>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `∮ f(z) dz` over the whole boundary.
    pub fn contour_integral(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.tangents)
            .map(|((&z, &w), &t)| f(z) * t * w)
            .sum()
    }

    /// `∮ f ds` over the whole boundary.
    pub fn arclength_integral(&self, mut f: impl FnMut(Complex64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &w)| f(z) * w).sum()
    }

    pub(crate) fn push_component(&mut self, nodes: Vec<BoundaryNode>, component: usize, reverse: bool) {
        for n in nodes {
            self.nodes.push(n.point);
            self.weights.push(n.weight);
            self.tangents.push(if reverse { -n.tangent } else { n.tangent });
            self.component.push(component);
        }
    }

    pub(crate) fn empty() -> Self {
        QuadratureRule { nodes: vec![], weights: vec![], tangents: vec![], component: vec![] }
    }
}

type RuleCache = Mutex<HashMap<usize, &'static [(f64, f64)]>>;

/// Gauss–Legendre nodes and weights on [-1, 1], cached per order.
pub(crate) fn gauss_legendre(order: usize) -> &'static [(f64, f64)] {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("gauss-legendre cache poisoned");
    guard.entry(order).or_insert_with(|| {
        let rule = GaussLegendre::new(order.max(2)).expect("order >= 2");
        let mut pairs = rule.into_node_weight_pairs();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Box::leak(pairs.into_boxed_slice())
    })
}
