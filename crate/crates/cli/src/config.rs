//! `key = value` configuration files and the flag > file > default merge.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;

use crate::args::{Cli, Command, Format, Momentum, RangeArgs, Suite};
use crate::error::{CliError, Result};

/// Every tunable the subcommands read, each possibly unset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub n: Option<Vec<u32>>,
    pub r: Option<Vec<u32>>,
    pub t: Option<Vec<f64>>,
    pub phi: Option<Vec<f64>>,
    pub hbar: Option<f64>,
    pub mass: Option<f64>,
    pub omega: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub momentum: Option<Momentum>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    pub suite: Option<Suite>,
    pub tol: Option<f64>,
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|v| v.trim().parse::<T>().map_err(|_| CliError::usage(format!("{key}: cannot parse {v:?}"))))
        .collect()
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse::<T>().map_err(|_| CliError::usage(format!("{key}: cannot parse {value:?}")))
}

fn choice<T: ValueEnum>(key: &str, value: &str) -> Result<T> {
    T::from_str(value.trim(), true).map_err(|e| CliError::usage(format!("{key}: {e}")))
}

impl Settings {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped;
    /// keys use the flag names with `-` or `_`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("config line {}: expected key = value", i + 1)))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim().trim_matches('"');
            match key.as_str() {
                "n" => s.n = Some(list(&key, value)?),
                "r" => s.r = Some(list(&key, value)?),
                "t" => s.t = Some(list(&key, value)?),
                "phi" => s.phi = Some(list(&key, value)?),
                "hbar" => s.hbar = Some(scalar(&key, value)?),
                "mass" => s.mass = Some(scalar(&key, value)?),
                "omega" => s.omega = Some(scalar(&key, value)?),
                "out" => s.out = Some(PathBuf::from(value)),
                "format" => s.format = Some(choice(&key, value)?),
                "threads" => s.threads = Some(scalar(&key, value)?),
                "momentum" => s.momentum = Some(choice(&key, value)?),
                "t_min" => s.t_min = Some(scalar(&key, value)?),
                "t_max" => s.t_max = Some(scalar(&key, value)?),
                "points" => s.points = Some(scalar(&key, value)?),
                "suite" => s.suite = Some(choice(&key, value)?),
                "tol" => s.tol = Some(scalar(&key, value)?),
                other => return Err(CliError::usage(format!("config line {}: unknown key {other:?}", i + 1))),
            }
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::File {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Values given on the command line.
    pub fn from_cli(cli: &Cli) -> Self {
        let g = &cli.global;
        let mut s = Settings {
            n: g.n.clone(),
            r: g.r.clone(),
            t: g.t.clone(),
            phi: g.phi.clone(),
            hbar: g.hbar,
            mass: g.mass,
            omega: g.omega,
            out: g.out.clone(),
            format: g.format,
            threads: g.threads,
            momentum: g.momentum,
            ..Default::default()
        };
        let range = |s: &mut Settings, r: &RangeArgs| {
            s.t_min = r.t_min;
            s.t_max = r.t_max;
            s.points = r.points;
        };
        match &cli.command {
            Command::Figure(f) => range(&mut s, &f.range),
            Command::Measure(m) => range(&mut s, &m.range),
            Command::Verify(v) => {
                s.suite = v.suite;
                s.tol = v.tol;
            }
            Command::Expect | Command::State(_) => {}
        }
        s
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(self, top: Settings) -> Settings {
        Settings {
            n: top.n.or(self.n),
            r: top.r.or(self.r),
            t: top.t.or(self.t),
            phi: top.phi.or(self.phi),
            hbar: top.hbar.or(self.hbar),
            mass: top.mass.or(self.mass),
            omega: top.omega.or(self.omega),
            out: top.out.or(self.out),
            format: top.format.or(self.format),
            threads: top.threads.or(self.threads),
            momentum: top.momentum.or(self.momentum),
            t_min: top.t_min.or(self.t_min),
            t_max: top.t_max.or(self.t_max),
            points: top.points.or(self.points),
            suite: top.suite.or(self.suite),
            tol: top.tol.or(self.tol),
        }
    }

    /// Flags over the `--config` file.
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let flags = Self::from_cli(cli);
        match &cli.global.config {
            Some(path) => Ok(Self::from_file(path)?.overlay(flags)),
            None => Ok(flags),
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    pub fn constants(&self) -> (f64, f64, f64) {
        (self.hbar.unwrap_or(1.0), self.mass.unwrap_or(1.0), self.omega.unwrap_or(1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_comments() {
        let s = Settings::parse("# sweep\nn = 1, 2,3\nphi=0.5\nformat = json # trailing\nt-max = 4\n").unwrap();
        assert_eq!(s.n, Some(vec![1, 2, 3]));
        assert_eq!(s.phi, Some(vec![0.5]));
        assert_eq!(s.format, Some(Format::Json));
        assert_eq!(s.t_max, Some(4.0));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(matches!(Settings::parse("colour = red"), Err(CliError::Usage(_))));
        assert!(matches!(Settings::parse("n = two"), Err(CliError::Usage(_))));
        assert!(matches!(Settings::parse("just text"), Err(CliError::Usage(_))));
    }

    #[test]
    fn flags_win() {
        let file = Settings::parse("n = 3\nr = 2\n").unwrap();
        let flags = Settings {
            n: Some(vec![5]),
            ..Default::default()
        };
        let s = file.overlay(flags);
        assert_eq!(s.n, Some(vec![5]));
        assert_eq!(s.r, Some(vec![2]));
        assert_eq!(s.hbar, None);
    }
}
