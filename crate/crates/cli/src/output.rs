//! CSV and JSON writers. Every file is written to a temporary sibling and
//! renamed into place, so a failed command never leaves a partial file.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use kicksim::{bloch_vector, l1_coherence, rotating_frame, Sample, SweepRow};
use tempfile::NamedTempFile;

use crate::config::Frame;
use crate::error::CliError;

pub const TRAJECTORY_HEADER: &str = "t,re_a0,im_a0,re_a1,im_a1,sx,sy,sz,c_l1";
pub const SWEEP_HEADER: &str =
    "width_s,omega0_tau,fidelity,max_coherence,final_coherence,effective_kick_area,regime,norm_drift";
pub const COMPARE_HEADER: &str = "width_s,omega0_tau,deviation";

/// 17 significant digits.
fn num(out: &mut String, x: f64) {
    let _ = write!(out, "{x:.16e}");
}

fn row(out: &mut String, values: &[f64]) {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        num(out, *v);
    }
}

/// Trajectory CSV of every `stride`-th sample plus the final one.
pub fn trajectory_csv(samples: &[Sample], stride: usize, frame: Frame, frame_frequency: f64) -> String {
    let mut out = String::with_capacity(samples.len() / stride.max(1) * 220 + 64);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    let last = samples.len().saturating_sub(1);
    for (i, s) in samples.iter().enumerate() {
        if i % stride != 0 && i != last {
            continue;
        }
        let state = match frame {
            Frame::Lab => s.state,
            Frame::Rotating => rotating_frame(&s.state, s.t, frame_frequency),
        };
        let b = bloch_vector(&state);
        let (a0, a1) = (state.a0(), state.a1());
        row(
            &mut out,
            &[s.t, a0.re, a0.im, a1.re, a1.im, b.x, b.y, b.z, l1_coherence(&state)],
        );
        out.push('\n');
    }
    out
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        row(&mut out, &[r.width, r.omega0_tau, r.fidelity, r.max_coherence, r.final_coherence, r.effective_area]);
        let _ = write!(out, ",{},", r.regime);
        num(&mut out, r.norm_drift);
        out.push('\n');
    }
    out
}

/// `(width, ω0τ, deviation)` rows.
pub fn compare_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from(COMPARE_HEADER);
    out.push('\n');
    for &(w, wt, d) in rows {
        row(&mut out, &[w, wt, d]);
        out.push('\n');
    }
    out
}

/// Files staged in `dir`, renamed into place together by [`Staged::commit`].
pub struct Staged {
    dir: PathBuf,
    files: Vec<(NamedTempFile, PathBuf)>,
}

impl Staged {
    /// Creates `dir` if needed.
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn add(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let target = self.dir.join(name);
        let parent = target.parent().unwrap_or(&self.dir).to_path_buf();
        let mut tmp = NamedTempFile::new_in(&parent).map_err(|e| CliError::io(&parent, e))?;
        tmp.write_all(contents.as_bytes())
            .and_then(|_| tmp.flush())
            .map_err(|e| CliError::io(&target, e))?;
        self.files.push((tmp, target));
        Ok(())
    }

    /// Moves every staged file to its final path and returns the paths. If
    /// one rename fails, the files already moved are removed again.
    pub fn commit(self) -> Result<Vec<PathBuf>, CliError> {
        let mut written = Vec::new();
        for (tmp, target) in self.files {
            if let Err(e) = tmp.persist(&target) {
                for done in &written {
                    let _ = fs::remove_file(done);
                }
                return Err(CliError::io(&target, e.error));
            }
            written.push(target);
        }
        Ok(written)
    }
}
