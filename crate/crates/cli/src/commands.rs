//! `evolve` and `transform`.

use std::fs;
use std::io::Write;
use std::path::Path;

use tfps_core::dump::{load_config, load_phase, save_config, save_phase};
use tfps_core::evolve::{evolve_linear_exact, evolve_numeric, evolve_quadratic_exact, norm_drift};
use tfps_core::states::coherent_config;
use tfps_core::wavepacket::{gaussian_window, wavepacket_adjoint, wavepacket_forward};
use tfps_core::{ConfigField, EvolutionPlan, Field, GridSpec, Hamiltonian, Method, PhaseField};

use crate::config::Config;
use crate::{CliError, Window};

fn unwritable(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Unwritable { path: path.display().to_string(), source }
}

/// Maps I/O failures while saving to exit code 3.
fn saved(path: &Path, r: tfps_core::Result<()>) -> Result<(), CliError> {
    match r {
        Err(tfps_core::Error::Io(e)) => Err(unwritable(path)(e)),
        other => Ok(other?),
    }
}

fn initial_state(cfg: &Config, grid: GridSpec) -> Result<PhaseField, CliError> {
    let (xc, pc) = cfg.center;
    let psi = coherent_config(grid, xc, pc, cfg.width);
    Ok(wavepacket_forward(&psi, &gaussian_window(grid))?)
}

fn exact_at(h: &Hamiltonian, t: f64, psi0: &PhaseField) -> Option<tfps_core::Result<PhaseField>> {
    match h {
        Hamiltonian::Linear(l) => Some(evolve_linear_exact(l.z0(), t, psi0)),
        Hamiltonian::Quadratic(q) => Some(evolve_quadratic_exact(q, t, psi0)),
        Hamiltonian::Separable { .. } => None,
    }
}

pub fn evolve(cfg: &Config, out: &Path, timestamp: bool) -> Result<(), CliError> {
    let grid = cfg.grid()?;
    let h = cfg.hamiltonian();
    let psi0 = initial_state(cfg, grid)?;
    // Validate the plan before touching the file system.
    let plan = if cfg.t_final > 0.0 {
        Some(EvolutionPlan::new(h.clone(), cfg.t_final, cfg.dt, cfg.method, cfg.record_every)?)
    } else {
        None
    };
    fs::create_dir_all(out).map_err(unwritable(out))?;

    let history = match &plan {
        Some(plan) => evolve_numeric(plan, &psi0)?,
        None => vec![(0.0, psi0.clone())],
    };

    let manifest_path = out.join("manifest.csv");
    let mut manifest = String::from("t,norm,file\n");
    println!("{:>10} {:>22} {:>12}", "t", "norm", "drift");
    let drift = norm_drift(&history)?;
    for (i, ((t, psi), (_, d))) in history.iter().zip(&drift).enumerate() {
        let name = format!("snapshot_{i:05}.tfgrid");
        let path = out.join(&name);
        saved(&path, save_phase(&path, psi, timestamp))?;
        let norm = psi.l2_norm();
        manifest.push_str(&format!("{t:.12},{norm:.16e},{name}\n"));
        println!("{t:>10.4} {norm:>22.16} {d:>12.3e}");
    }
    fs::File::create(&manifest_path)
        .and_then(|mut f| f.write_all(manifest.as_bytes()))
        .map_err(unwritable(&manifest_path))?;

    let (t_last, last) = history.last().expect("history is never empty");
    let (_, d_last) = drift.last().expect("drift matches history");
    println!("snapshots: {} written to {}", history.len(), out.display());
    println!("final norm drift: {d_last:.3e}");
    if *t_last > 0.0 && cfg.method != Method::Exact {
        if let Some(exact) = exact_at(&h, *t_last, &psi0) {
            let err = exact?.distance(last) / psi0.l2_norm();
            println!("exact-vs-numeric relative L2 error at t = {t_last:.6}: {err:.3e}");
        }
    }
    Ok(())
}

fn window(kind: Window, grid: GridSpec) -> ConfigField {
    match kind {
        Window::Gaussian => gaussian_window(grid),
    }
}

fn read_input<T>(path: &Path, r: tfps_core::Result<T>) -> Result<T, CliError> {
    match r {
        Err(tfps_core::Error::Io(e)) => Err(CliError::Input(format!("cannot read {}: {e}", path.display()))),
        other => Ok(other?),
    }
}

pub fn transform(input: &Path, out: &Path, kind: Window, adjoint: bool, timestamp: bool) -> Result<(), CliError> {
    if adjoint {
        let psi = read_input(input, load_phase(input))?;
        let w = window(kind, *psi.grid());
        let back = wavepacket_adjoint(&psi, &w)?;
        saved(out, save_config(out, &back, timestamp))?;
        let img = wavepacket_forward(&back, &w)?;
        println!("input norm: {:.12e}", psi.l2_norm());
        println!("output norm: {:.12e}", back.l2_norm());
        println!("distance of input from the transform image: {:.3e}", img.distance(&psi));
    } else {
        let psi = read_input(input, load_config(input))?;
        let w = window(kind, *psi.grid());
        let img = wavepacket_forward(&psi, &w)?;
        saved(out, save_phase(out, &img, timestamp))?;
        println!("input norm: {:.12e}", psi.l2_norm());
        println!("isometry defect: {:.3e}", (img.l2_norm() - psi.l2_norm()).abs());
    }
    Ok(())
}
