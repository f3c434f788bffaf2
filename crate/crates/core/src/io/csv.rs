use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::analysis::ConvergenceReport;
use crate::error::{Error, Result};
use crate::graph::{DomainDecomposition, WeightedGraph};
use crate::oracle::OracleTrajectory;
use crate::rothe::RotheSequence;

/// 17 significant digits, enough to recover every `f64` exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// `t,vertex,u,w` for every grid time and every vertex of `Ω`.
pub fn trajectory_csv(graph: &WeightedGraph, dom: &DomainDecomposition, seq: &RotheSequence) -> String {
    let mut out = String::from("t,vertex,u,w\n");
    for i in 0..=seq.steps() {
        let t = fmt_f64(seq.grid().time(i));
        for &x in dom.omega() {
            let _ = writeln!(
                out,
                "{t},{},{},{}",
                graph.label(x),
                fmt_f64(seq.u(i)[x]),
                fmt_f64(seq.w(i)[x])
            );
        }
    }
    out
}

/// `n,n_refined,distance,ratio`; the ratio `d_k/d_{k−1}` is empty on the
/// first row.
pub fn convergence_csv(report: &ConvergenceReport) -> String {
    let mut out = String::from("n,n_refined,distance,ratio\n");
    for (k, (&n, &d)) in report.n_list.iter().zip(&report.distances).enumerate() {
        let ratio = if k == 0 {
            String::new()
        } else {
            fmt_f64(d / report.distances[k - 1])
        };
        let _ = writeln!(out, "{n},{},{},{ratio}", 2 * n, fmt_f64(d));
    }
    out
}

/// `t,vertex,u,v` at every stored snapshot, for every vertex of `Ω`.
pub fn oracle_csv(graph: &WeightedGraph, dom: &DomainDecomposition, traj: &OracleTrajectory) -> Result<String> {
    let mut out = String::from("t,vertex,u,v\n");
    for s in traj.snapshots() {
        let (u, v) = traj.at(s.t)?;
        let t = fmt_f64(s.t);
        for &x in dom.omega() {
            let _ = writeln!(out, "{t},{},{},{}", graph.label(x), fmt_f64(u[x]), fmt_f64(v[x]));
        }
    }
    Ok(out)
}

/// `t,vertex,u_rothe,w_rothe,u_oracle,v_oracle` at every grid time.
pub fn comparison_csv(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    seq: &RotheSequence,
    traj: &OracleTrajectory,
) -> Result<String> {
    let mut out = String::from("t,vertex,u_rothe,w_rothe,u_oracle,v_oracle\n");
    for i in 0..=seq.steps() {
        let time = seq.grid().time(i);
        let (u, v) = traj.at(time)?;
        let t = fmt_f64(time);
        for &x in dom.omega() {
            let _ = writeln!(
                out,
                "{t},{},{},{},{},{}",
                graph.label(x),
                fmt_f64(seq.u(i)[x]),
                fmt_f64(seq.w(i)[x]),
                fmt_f64(u[x]),
                fmt_f64(v[x])
            );
        }
    }
    Ok(out)
}
