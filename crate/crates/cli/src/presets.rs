//! Map configurations reproducing the published figures.
//!
//! The convexity and third-derivative domains are tiny; their presets zoom
//! onto the window where they live, at the default resolution.

use std::f64::consts::PI;

use duopos::domains::BasisKind;

use crate::config::{CommandKind, RunConfig};

pub const NAMES: [&str; 22] = [
    "fig1", "fig2l", "fig2r", "fig3l", "fig3r", "fig4l", "fig4r", "fig5l", "fig5r", "fig6l", "fig6r", "fig7l", "fig7r",
    "fig8l", "fig8r", "fig9l", "fig9r", "fig10l", "fig10r", "fig11l", "fig11r", "fig11r-wide",
];

/// Window around the convex survivor domain of the `(0, 4, 8)` mixture.
pub const CONVEX_WINDOW: ([f64; 2], [f64; 2]) = ([-0.1, 0.3], [0.0, 0.08]);
/// Window around the third-derivative domain of the radial `(0, 2, 4)` mixture.
pub const THIRD_WINDOW: ([f64; 2], [f64; 2]) = ([0.1, 0.25], [0.0, 0.06]);

fn base(basis: BasisKind, orders: &[u32], constraints: &[&str]) -> RunConfig {
    RunConfig {
        command: Some(CommandKind::Map),
        basis: Some(basis),
        orders: Some(orders.to_vec()),
        constraints: Some(constraints.iter().map(|s| s.to_string()).collect()),
        ..Default::default()
    }
}

fn cut(gamma: f64) -> RunConfig {
    RunConfig {
        gamma: Some(gamma),
        ..base(BasisKind::Hermite, &[0, 4, 8, 12], &["positivity_p"])
    }
}

fn window(mut c: RunConfig, (a, b): ([f64; 2], [f64; 2])) -> RunConfig {
    c.alpha_range = Some(a);
    c.beta_range = Some(b);
    c
}

fn convex(rc2: f64) -> RunConfig {
    let c = RunConfig {
        rc2: Some(rc2),
        ..base(BasisKind::Hermite, &[0, 4, 8], &["convex_psi"])
    };
    window(c, CONVEX_WINDOW)
}

pub fn preset(name: &str) -> Option<RunConfig> {
    use BasisKind::{Hermite, Laguerre};
    let mut cfg = match name {
        "fig1" => base(Hermite, &[0, 4, 8], &["positivity_p"]),
        "fig2l" => cut(PI / 1e6),
        "fig2r" => cut(PI / 15.0),
        "fig3l" => cut(2.0 * PI / 15.0),
        "fig3r" => cut(PI / 6.0),
        "fig4l" => cut(PI / 5.0),
        "fig4r" => cut(7.0 * PI / 30.0),
        "fig5l" => cut(4.0 * PI / 15.0),
        "fig5r" => cut(3.0 * PI / 10.0),
        "fig6l" => base(Hermite, &[0, 2, 4], &["positivity_p"]),
        "fig6r" => base(Hermite, &[0, 2, 4], &["positivity_q"]),
        "fig7l" => base(Hermite, &[0, 2, 4], &["positivity_p", "positivity_q"]),
        "fig7r" => base(Hermite, &[0, 2, 4], &["positivity_p", "positivity_q", "monotone_phi"]),
        "fig8l" => window(base(Hermite, &[0, 4, 8], &["positivity_p"]), CONVEX_WINDOW),
        "fig8r" => convex(1.0),
        "fig9l" => convex(2.0 / 3.0),
        "fig9r" => convex(0.4),
        "fig10l" => base(Laguerre, &[0, 1, 2], &["positivity_q"]),
        "fig10r" => base(Laguerre, &[0, 1, 2], &["positivity_p", "positivity_q"]),
        "fig11l" => base(Laguerre, &[0, 2, 4], &["positivity_p"]),
        "fig11r" => window(
            RunConfig {
                rt2: Some(1.4),
                ..base(Laguerre, &[0, 2, 4], &["third_deriv_negative"])
            },
            THIRD_WINDOW,
        ),
        "fig11r-wide" => RunConfig {
            rt2: Some(1.4),
            ..base(Laguerre, &[0, 2, 4], &["third_deriv_negative"])
        },
        _ => return None,
    };
    cfg.preset = Some(name.to_string());
    Some(cfg)
}
