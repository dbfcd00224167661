//! Composite Gauss–Legendre rules on real intervals.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

/// Nodes and weights of a composite rule, sorted by node.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    /// `degree`-point Gauss–Legendre rule on each consecutive pair of `breaks`.
    pub fn on_breaks(breaks: &[f64], degree: usize) -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(degree.max(1)).expect("nonzero degree"));
        let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut nodes = Vec::with_capacity(pairs.len() * breaks.len());
        let mut weights = Vec::with_capacity(nodes.capacity());
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (b + a);
            for &(x, wt) in &pairs {
                nodes.push(mid + half * x);
                weights.push(half * wt);
            }
        }
        Self { nodes, weights }
    }

    /// Panels on `[0, end]` whose widths double away from the origin, starting at `first`.
    pub fn geometric(first: f64, end: f64, degree: usize) -> Self {
        let mut breaks = vec![0.0];
        let mut x = first;
        while x < end {
            breaks.push(x);
            x *= 2.0;
        }
        breaks.push(end);
        Self::on_breaks(&breaks, degree)
    }

    /// Panels on `[a, b]` refined geometrically towards the interior point `c`,
    /// with the innermost panels of width `finest`.
    pub fn graded_towards(a: f64, b: f64, c: f64, finest: f64, degree: usize) -> Self {
        let mut breaks = vec![a, b, c.clamp(a, b)];
        let mut d = finest;
        while c - d > a || c + d < b {
            if c - d > a {
                breaks.push(c - d);
            }
            if c + d < b {
                breaks.push(c + d);
            }
            d *= 2.0;
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|x, y| (*x - *y).abs() < 1e-300);
        Self::on_breaks(&breaks, degree)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
