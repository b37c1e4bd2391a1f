use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes per Gauss-Legendre panel.
pub const PANEL_ORDER: usize = 10;

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_ORDER))
}

/// Composite Gauss-Legendre rule on `[a, b]` with equal panels.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Mesh {
    pub fn composite(a: f64, b: f64, panels: usize) -> Mesh {
        let (x, w) = panel_rule();
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * PANEL_ORDER);
        let mut weights = Vec::with_capacity(panels * PANEL_ORDER);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            for (xi, wi) in x.iter().zip(w) {
                nodes.push(mid + 0.5 * h * xi);
                weights.push(0.5 * h * wi);
            }
        }
        Mesh { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Panel count giving at least `points_per_cycle` nodes per `2π` of phase on
/// `[a, b]`, with the phase rate sampled at 65 points.
pub fn panels_for_rate(rate: &dyn Fn(f64) -> f64, a: f64, b: f64, points_per_cycle: f64) -> usize {
    const SAMPLES: usize = 65;
    let max_rate = (0..SAMPLES)
        .map(|i| rate(a + (b - a) * i as f64 / (SAMPLES - 1) as f64).abs())
        .fold(0.0_f64, f64::max);
    panels_for_phase(max_rate * (b - a), points_per_cycle)
}

/// Panel count for a total phase excursion `phase` (radians).
pub fn panels_for_phase(phase: f64, points_per_cycle: f64) -> usize {
    let cycles = phase.abs() / (2.0 * PI);
    let panels = (cycles * points_per_cycle / PANEL_ORDER as f64).ceil();
    if panels.is_finite() && panels >= 1.0 {
        panels as usize
    } else {
        1
    }
}
