//! Record builders, one per subcommand.

use super::config::{EvProblem, KernelConfig, OvProblem};
use super::record::{tolerance_value, IntoValue, ResultRecord};
use crate::error::Result;
use crate::ev_coupling::{ev_channel, ev_matrix_element, y_alpha, ActiveChannel, GeometryMode};
use crate::ledge::{dichroism, enumerate_edge_transitions, DensityOfStates, Helicity, HelicityKernel};
use crate::matter::{ComState, HydrogenicState, RadialProfile};
use crate::ov_coupling::ov_matrix_element;
use crate::quadrature::Tolerance;
use num_complex::Complex64;

fn mj_label(two_mj: i32) -> String {
    format!("{two_mj:+}/2")
}

fn profile_name(p: RadialProfile) -> &'static str {
    match p {
        RadialProfile::RingGaussian { .. } => "ring_gaussian",
        RadialProfile::Bessel => "bessel",
    }
}

fn with_internal(r: ResultRecord, i: &HydrogenicState, f: &HydrogenicState) -> ResultRecord {
    r.input("n", i.n())
        .input("l_int", i.l())
        .input("m", i.m())
        .input("n_prime", f.n())
        .input("l_int_prime", f.l())
        .input("m_prime", f.m())
}

fn with_com(r: ResultRecord, i: &ComState, f: &ComState) -> ResultRecord {
    r.input("big_l", i.l())
        .input("big_l_prime", f.l())
        .input("com_profile", profile_name(i.profile()))
        .input("com_profile_prime", profile_name(f.profile()))
        .input("big_k_z", i.k_z())
        .input("big_k_z_prime", f.k_z())
}

pub fn y_alpha_record(n: i32, f: f64, g: f64, tol: &Tolerance) -> Result<ResultRecord> {
    let y = y_alpha(n, f, g, tol)?;
    Ok(ResultRecord::new("y-alpha")
        .input("n", n)
        .input("f", f)
        .input("g", g)
        .input("tolerance", tolerance_value(tol))
        .output("value", y.value)
        .output("imag", y.imag)
        .diag("error_estimate", y.error_estimate)
        .diag("evaluations", y.evaluations)
        .diag("converged", y.converged))
}

pub fn ov_record(p: &OvProblem) -> Result<ResultRecord> {
    let m = ov_matrix_element(
        &p.beam,
        &p.internal_i,
        &p.internal_f,
        &p.com_i,
        &p.com_f,
        p.n_i,
        p.n_f,
        &p.settings,
    )?;
    let active = [&m.absorption, &m.emission]
        .into_iter()
        .find(|a| a.amplitude != Complex64::new(0.0, 0.0));
    let eps = p.beam.polarization();
    let r = ResultRecord::new("ov-matrix")
        .input("beam_l", p.beam.l())
        .input("k_perp", p.beam.k_perp())
        .input("k_z", p.beam.k_z())
        .input("e0", p.beam.amplitude())
        .input("polarization", serde_json::Value::Array(eps.iter().map(|x| x.into_value()).collect()));
    let r = with_com(with_internal(r, &p.internal_i, &p.internal_f), &p.com_i, &p.com_f)
        .input("photons_initial", p.n_i.0)
        .input("photons_final", p.n_f.0)
        .input("r_max", p.settings.r_max)
        .input("l_z", p.settings.l_z);
    Ok(r.output_complex("value", m.value)
        .output("channel", active.map_or("none", |a| a.channel.name()))
        .output_complex("prefactor", m.prefactor)
        .output_complex("projected_dipole", m.projected_dipole)
        .output_complex("dipole_plus", m.dipole.plus)
        .output_complex("dipole_minus", m.dipole.minus)
        .output_complex("dipole_z", m.dipole.z)
        .output_complex("absorption", m.absorption.amplitude)
        .output_complex("emission", m.emission.amplitude)
        .output("delta_l_absorption", m.absorption.delta_l_satisfied)
        .output("delta_n_absorption", m.absorption.delta_n_satisfied)
        .output("delta_l_emission", m.emission.delta_l_satisfied)
        .output("delta_n_emission", m.emission.delta_n_satisfied)
        .output("kz_mismatch_absorption", m.absorption.kz_mismatch)
        .output("kz_mismatch_emission", m.emission.kz_mismatch)
        .output_complex("radial_overlap", active.map_or(Complex64::new(0.0, 0.0), |a| a.radial_overlap))
        .diag("error_estimate", m.absorption.error_estimate + m.emission.error_estimate)
        .diag("evaluations", m.absorption.evaluations + m.emission.evaluations)
        .diag("converged", m.converged()))
}

pub fn ev_record(p: &EvProblem) -> Result<ResultRecord> {
    let m = ev_matrix_element(
        &p.beam_i,
        &p.beam_f,
        &p.internal_i,
        &p.internal_f,
        &p.com_i,
        &p.com_f,
        &p.mode,
        &p.tol,
    )?;
    let r = ResultRecord::new("ev-matrix")
        .input("beam_l", p.beam_i.l())
        .input("beam_l_prime", p.beam_f.l())
        .input("k_perp", p.beam_i.k_perp())
        .input("k_perp_prime", p.beam_f.k_perp());
    let r = with_com(with_internal(r, &p.internal_i, &p.internal_f), &p.com_i, &p.com_f);
    let r = match p.mode {
        GeometryMode::Fixed(k) => r
            .input("geometry", "fixed")
            .input("f", k.f)
            .input("g", k.g)
            .input("kappa_in", k.kappa)
            .input("lambda_in", k.lambda)
            .input("eta_in", k.eta)
            .input("r_max", None::<f64>)
            .input("l_z", None::<f64>)
            .input("exclusion", None::<f64>),
        GeometryMode::Integrated(g) => r
            .input("geometry", "integrated")
            .input("f", None::<f64>)
            .input("g", None::<f64>)
            .input("kappa_in", None::<f64>)
            .input("lambda_in", None::<f64>)
            .input("eta_in", None::<f64>)
            .input("r_max", g.volume.r_max)
            .input("l_z", g.volume.l_z)
            .input("exclusion", g.exclusion),
    };
    let r = r.input("tolerance", tolerance_value(&p.tol));
    let zero = Complex64::new(0.0, 0.0);
    let k = m.kernel;
    let kv = |f: fn(&crate::ev_coupling::KernelCoefficients) -> Complex64| k.as_ref().map_or(zero, f);
    Ok(r.output("channel", m.active_channel.name())
        .output_complex("value", m.value())
        .output_complex("q", m.q)
        .output_complex("s", m.s)
        .output_complex("u", m.u)
        .output_complex("c", kv(|k| k.c))
        .output_complex("d", kv(|k| k.d))
        .output_complex("i", kv(|k| k.i))
        .output_complex("kappa", kv(|k| k.kappa))
        .output_complex("lambda", kv(|k| k.lambda))
        .output_complex("eta", kv(|k| k.eta))
        .diag("error_estimate", k.map_or(0.0, |k| k.error_estimate))
        .diag("evaluations", k.map_or(0, |k| k.evaluations))
        .diag("converged", k.is_none_or(|k| k.converged)))
}

/// Electron-vortex channel for every `l - l'`, `L - L'` in `-2..=2` and
/// `m' - m` in `-1..=1`.
pub fn selection_table_records() -> Vec<ResultRecord> {
    let mut out = Vec::new();
    for dl in -2..=2 {
        for dbl in -2..=2 {
            for dm in -1..=1 {
                let ch = ev_channel(dl, 0, dbl, 0, 0, dm);
                let (factor, component) = match ch {
                    ActiveChannel::Plus => ("C", "(q_x+iq_y)/2"),
                    ActiveChannel::Minus => ("D", "(q_x-iq_y)/2"),
                    ActiveChannel::Zero => ("I", "q_z"),
                    ActiveChannel::None => ("", ""),
                };
                out.push(
                    ResultRecord::new("selection-table")
                        .input("l_minus_l_prime", dl)
                        .input("big_l_minus_big_l_prime", dbl)
                        .input("m_prime_minus_m", dm)
                        .output("channel", ch.name())
                        .output("allowed", ch != ActiveChannel::None)
                        .output("kernel_factor", factor)
                        .output("internal_operator", component),
                );
            }
        }
    }
    out
}

/// The L-edge lines for one helicity, or both when `beam_l` is `None`.
pub fn ledge_records(beam_l: Option<Helicity>, radial: f64) -> Result<Vec<ResultRecord>> {
    let helicities = match beam_l {
        Some(h) => vec![h],
        None => vec![Helicity::Plus, Helicity::Minus],
    };
    let mut out = Vec::new();
    for h in helicities {
        for t in enumerate_edge_transitions(h) {
            out.push(
                ResultRecord::new("ledge")
                    .input("beam_l", h.value())
                    .input("radial", radial)
                    .output("edge", t.edge.name())
                    .output("initial_shell", t.initial.shell().label())
                    .output("initial_mj", mj_label(t.initial.two_mj()))
                    .output("final_shell", t.final_.shell().label())
                    .output("final_mj", mj_label(t.final_.two_mj()))
                    .output("strength", radial * radial * t.strength),
            );
        }
    }
    Ok(out)
}

pub fn kernel_label(k: &KernelConfig) -> &'static str {
    match k {
        KernelConfig::SelectionRule => "selection_rule",
        KernelConfig::Fixed { .. } => "fixed",
    }
}

/// One row per edge and a `total` row.
pub fn dichroism_records(
    dos: &DensityOfStates,
    kernel: &HelicityKernel,
    kernel_mode: &str,
    radial: f64,
) -> Result<Vec<ResultRecord>> {
    let r = dichroism(dos, kernel, radial)?;
    let dos_echo = serde_json::Value::Array(
        dos.entries()
            .map(|(s, tm, w)| serde_json::json!([s.label(), mj_label(tm), w.into_value()]))
            .collect(),
    );
    let row = |edge: &str, gp: f64, gm: f64| {
        ResultRecord::new("dichroism")
            .input("kernel", kernel_mode)
            .input("radial", radial)
            .input("dos", dos_echo.clone())
            .output("edge", edge)
            .output("c_sq", kernel.c.norm_sqr())
            .output("d_sq", kernel.d.norm_sqr())
            .output("gamma_plus", gp)
            .output("gamma_minus", gm)
            .output("dichroism", gp - gm)
    };
    let mut out: Vec<_> = r
        .per_edge
        .iter()
        .map(|e| row(e.edge.name(), e.gamma_plus, e.gamma_minus))
        .collect();
    out.push(row("total", r.gamma_plus, r.gamma_minus));
    Ok(out)
}
