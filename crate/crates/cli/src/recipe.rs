//! Named sweep configurations for the standard datasets, sized for a desktop.

use altxxz::{Backend, SweepAxis};

use crate::config::{OrderGrid, Range, ScalingSpec, SweepConfig};
use crate::error::{CliError, Result};

pub const RECIPES: [&str; 7] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

fn anisotropy_sweep(name: &str, blocks: &[usize]) -> SweepConfig {
    let mut c = SweepConfig::new(
        Backend::ExactDiag,
        SweepAxis::Anisotropy,
        0.3,
        Range {
            start: 0.0,
            stop: 6.0,
            step: 0.05,
        },
    );
    c.name = name.into();
    c.sizes = vec![16];
    c.block_lens = blocks.to_vec();
    c.output_dir = format!("out/{name}").into();
    c
}

fn thermo_dimerization_sweep(name: &str) -> SweepConfig {
    let mut c = SweepConfig::new(
        Backend::FreeFermionThermo,
        SweepAxis::Dimerization,
        0.0,
        Range {
            start: -0.99,
            stop: 0.99,
            step: 0.01,
        },
    );
    c.name = name.into();
    c.block_lens = vec![4, 60];
    c.output_dir = format!("out/{name}").into();
    c
}

/// The recipe `name`.
///
/// | name | dataset |
/// |------|---------|
/// | fig2 | DLC and majorization maps over `Δ ∈ [0, 6]`, `δ = 0.3`, `N = 16`, `L_A ∈ {4, 8}` |
/// | fig3 | lowest entanglement levels along the same sweep |
/// | fig4 | `W` against `Δ` for `L_A ∈ {4, 6, 8}` |
/// | fig5 | DLC maps over `δ ∈ [-0.99, 0.99]` at `Δ = 0`, infinite chain, `L_A ∈ {4, 60}` |
/// | fig6 | majorization over the same `δ` sweep |
/// | fig7 | small-`α` entropies and spectrum over `δ` at `Δ = 4`, `N = 16`, `L_A = 4` |
/// | fig8 | pseudo-critical points for `N ∈ {8, 12, 16, 20}`, `L_A = N/2` |
pub fn figure_recipe(name: &str) -> Result<SweepConfig> {
    let c = match name {
        "fig2" => anisotropy_sweep(name, &[4, 8]),
        "fig3" => {
            let mut c = anisotropy_sweep(name, &[4, 8]);
            c.spectrum_levels = 4;
            c
        }
        "fig4" => anisotropy_sweep(name, &[4, 6, 8]),
        "fig5" => thermo_dimerization_sweep(name),
        "fig6" => {
            let mut c = thermo_dimerization_sweep(name);
            c.majorization_levels = 1024;
            c
        }
        "fig7" => {
            let mut c = SweepConfig::new(
                Backend::ExactDiag,
                SweepAxis::Dimerization,
                4.0,
                Range {
                    start: -0.95,
                    stop: 0.95,
                    step: 0.01,
                },
            );
            c.name = name.into();
            c.sizes = vec![16];
            c.block_lens = vec![4];
            c.orders = OrderGrid {
                count: 200,
                lo: 1e-3,
                hi: 1e3,
            };
            c.spectrum_levels = 8;
            c.output_dir = "out/fig7".into();
            c
        }
        "fig8" => {
            let mut c = SweepConfig::new(
                Backend::ExactDiag,
                SweepAxis::Anisotropy,
                0.3,
                Range {
                    start: 1.5,
                    stop: 5.0,
                    step: 0.05,
                },
            );
            c.name = name.into();
            c.sizes = vec![8, 12, 16, 20];
            c.half_block = true;
            c.orders = OrderGrid {
                count: 8,
                lo: 0.5,
                hi: 100.0,
            };
            c.spectrum_levels = 4;
            c.majorization_levels = 16;
            c.scaling = Some(ScalingSpec {
                window: Some([1.5, 5.0]),
            });
            c.output_dir = "out/fig8".into();
            c
        }
        _ => return Err(CliError::UnknownRecipe(name.into())),
    };
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_recipe_validates() {
        for name in RECIPES {
            figure_recipe(name).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn thermodynamic_recipe_shape() {
        let c = figure_recipe("fig5").unwrap();
        assert_eq!(c.backend, Backend::FreeFermionThermo);
        assert_eq!(c.block_lens, vec![4, 60]);
        assert_eq!(c.fixed, vec![0.0]);
        let g = c.range.values();
        assert!(g[0] > -1.0 && *g.last().unwrap() < 1.0);
    }

    #[test]
    fn unknown_recipe_is_an_error() {
        assert!(matches!(
            figure_recipe("fig9"),
            Err(CliError::UnknownRecipe(_))
        ));
    }
}
