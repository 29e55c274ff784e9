//! End-to-end runs: abstraction, verification, cross-validation, exports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use crate::abstraction::{build_quotient_with, Abstraction, AbstractionOptions, AuditReport};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::Region;
use crate::problem::Problem;
use crate::quotient_io::{export_quotient, export_satisfying};
use crate::simulate::{cross_validate, CrossValidation};
use crate::svg::export_svg;
use crate::verify::{check_formula, SatisfyingSet};

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub out_dir: Option<PathBuf>,
    pub sample_count: usize,
    pub svg: bool,
    pub seed: u64,
    pub audit: bool,
    pub execution: Execution,
}

impl PipelineOptions {
    /// Options taken from the problem file.
    pub fn from_problem(p: &Problem) -> PipelineOptions {
        PipelineOptions {
            out_dir: p.options.out_dir.clone(),
            sample_count: p.options.sample_count,
            svg: p.options.svg,
            seed: p.options.seed,
            audit: true,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug)]
pub struct PipelineReport {
    pub abstraction: Abstraction,
    pub audit: Option<AuditReport>,
    pub satisfying: Option<SatisfyingSet>,
    pub cross_validation: Option<CrossValidation>,
    pub timings: Vec<(&'static str, Duration)>,
    pub written: Vec<PathBuf>,
}

impl PipelineReport {
    /// Fails if an audit or a cross-validation sample disagreed.
    pub fn check(&self) -> Result<()> {
        if let Some(a) = &self.audit {
            if !a.passed() {
                return Err(Error::invariant(format!(
                    "partition audit failed: {}",
                    a.failures.join("; ")
                )));
            }
        }
        if let Some(cv) = &self.cross_validation {
            if cv.mismatches() > 0 {
                return Err(Error::invariant(cv.summary()));
            }
        }
        Ok(())
    }

    pub fn text(&self) -> String {
        let abs = &self.abstraction;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "certified contraction rate: {} (declared {})",
            abs.rho_star,
            abs.lf.rho()
        );
        let _ = writeln!(out, "levels: N={}", abs.n_levels());
        let _ = writeln!(out, "quotient: {} states", abs.quotient.len());
        if let Some(a) = &self.audit {
            let _ = writeln!(
                out,
                "audit: {} ({} blocks checked)",
                if a.passed() { "pass" } else { "FAIL" },
                a.blocks
            );
            for f in &a.failures {
                let _ = writeln!(out, "  {f}");
            }
        }
        if let Some(s) = &self.satisfying {
            let _ = writeln!(out, "{}", s.summary());
        }
        if let Some(cv) = &self.cross_validation {
            let _ = writeln!(out, "{}", cv.summary());
        }
        for (stage, t) in &self.timings {
            let _ = writeln!(out, "time {stage}: {:.3}s", t.as_secs_f64());
        }
        for p in &self.written {
            let _ = writeln!(out, "wrote {}", p.display());
        }
        out
    }
}

fn timed<T>(timings: &mut Vec<(&'static str, Duration)>, stage: &'static str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.push((stage, start.elapsed()));
    out
}

fn write(dir: &Path, name: &str, contents: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    written.push(path);
    Ok(())
}

fn abstraction_stage(
    problem: &Problem,
    opts: &PipelineOptions,
    timings: &mut Vec<(&'static str, Duration)>,
) -> Result<(Abstraction, Option<AuditReport>)> {
    let abs = timed(timings, "abstraction", || {
        build_quotient_with(
            &problem.system,
            &problem.lf,
            &problem.gamma_d,
            &problem.gamma_x,
            &problem.regions,
            &AbstractionOptions {
                execution: opts.execution,
            },
        )
    })?;
    let audit = if opts.audit {
        Some(timed(timings, "audit", || abs.audit(opts.execution))?)
    } else {
        None
    };
    Ok((abs, audit))
}

/// Quotient only: builds, audits and exports the abstraction.
pub fn run_abstraction(problem: &Problem, opts: &PipelineOptions) -> Result<PipelineReport> {
    let mut timings = Vec::new();
    let (abs, audit) = abstraction_stage(problem, opts, &mut timings)?;
    let mut written = Vec::new();
    if let Some(dir) = &opts.out_dir {
        std::fs::create_dir_all(dir)?;
        write(dir, "quotient.txt", &export_quotient(&abs), &mut written)?;
        if opts.svg {
            let path = dir.join("partition.svg");
            if export_svg(&abs.partition, &Region::empty(abs.dim()), &path)? {
                written.push(path);
            }
        }
    }
    Ok(PipelineReport {
        abstraction: abs,
        audit,
        satisfying: None,
        cross_validation: None,
        timings,
        written,
    })
}

/// Abstraction, model checking of the problem's formula, optional
/// cross-validation, and exports.
pub fn run_pipeline(problem: &Problem, opts: &PipelineOptions) -> Result<PipelineReport> {
    let mut timings = Vec::new();
    let (abs, audit) = abstraction_stage(problem, opts, &mut timings)?;
    let sat = timed(&mut timings, "model checking", || check_formula(&abs, &problem.formula))?;
    let cross = if opts.sample_count > 0 {
        Some(timed(&mut timings, "cross-validation", || {
            cross_validate(
                &abs,
                &problem.formula,
                &sat,
                opts.sample_count,
                opts.seed,
                opts.execution,
            )
        })?)
    } else {
        None
    };
    let mut written = Vec::new();
    if let Some(dir) = &opts.out_dir {
        std::fs::create_dir_all(dir)?;
        write(dir, "quotient.txt", &export_quotient(&abs), &mut written)?;
        write(dir, "satisfying.txt", &export_satisfying(&abs, &sat), &mut written)?;
        if let Some(cv) = &cross {
            write(dir, "samples.txt", &cv.lines(), &mut written)?;
        }
        if opts.svg {
            for (name, highlight) in [
                ("partition.svg", Region::empty(abs.dim())),
                ("satisfying.svg", sat.region.clone()),
            ] {
                let path = dir.join(name);
                if export_svg(&abs.partition, &highlight, &path)? {
                    written.push(path);
                }
            }
        }
    }
    Ok(PipelineReport {
        abstraction: abs,
        audit,
        satisfying: Some(sat),
        cross_validation: cross,
        timings,
        written,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse_problem;

    const TOY: &str = r#"{"A": [["0.5"]], "L": [["1"]], "rho": "0.5", "gamma_D": "1",
        "gamma_X": "2", "formula": "F pid", "options": {"sample_count": 20, "seed": 3}}"#;

    #[test]
    fn toy_pipeline_writes_deterministic_outputs() {
        let problem = parse_problem(TOY).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let mut opts = PipelineOptions::from_problem(&problem);
        opts.out_dir = Some(dir.path().to_path_buf());
        let first = run_pipeline(&problem, &opts).unwrap();
        first.check().unwrap();
        assert_eq!(first.abstraction.quotient.len(), 3);
        assert_eq!(first.satisfying.as_ref().unwrap().len(), 3);
        let read = |n: &str| std::fs::read(dir.path().join(n)).unwrap();
        let (q1, s1) = (read("quotient.txt"), read("satisfying.txt"));
        run_pipeline(&problem, &opts).unwrap();
        assert_eq!(q1, read("quotient.txt"));
        assert_eq!(s1, read("satisfying.txt"));
        assert!(!dir.path().join("partition.svg").exists());
        assert!(first.text().contains("satisfying: 3 of 3 states"));
    }

    #[test]
    fn never_leaving_d_is_unsatisfiable() {
        let problem = parse_problem(TOY).unwrap().with_formula("G !pid").unwrap();
        let report = run_pipeline(&problem, &PipelineOptions::from_problem(&problem)).unwrap();
        assert!(report.satisfying.unwrap().is_empty());
    }
}
