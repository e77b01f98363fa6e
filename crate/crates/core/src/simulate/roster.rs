//! Procedure names understood by the experiment runner.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::stream::ScoreKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProcedureKind {
    OnlineEbh,
    ELond,
    /// Deadlines at the end of each batch.
    EToad,
    BoostPlus,
    BoostMinus,
    LocalPlus,
    LocalMinus,
    OnlineBh,
    Lond,
    /// Reshaped with the BY shape over the stream length.
    RLond,
    OnlineBr,
    Toad,
    OnlineSbh,
    Lord,
    Saffron,
}

impl ProcedureKind {
    pub const ALL: [ProcedureKind; 15] = [
        ProcedureKind::OnlineEbh,
        ProcedureKind::ELond,
        ProcedureKind::EToad,
        ProcedureKind::BoostPlus,
        ProcedureKind::BoostMinus,
        ProcedureKind::LocalPlus,
        ProcedureKind::LocalMinus,
        ProcedureKind::OnlineBh,
        ProcedureKind::Lond,
        ProcedureKind::RLond,
        ProcedureKind::OnlineBr,
        ProcedureKind::Toad,
        ProcedureKind::OnlineSbh,
        ProcedureKind::Lord,
        ProcedureKind::Saffron,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProcedureKind::OnlineEbh => "oe-bh",
            ProcedureKind::ELond => "e-lond",
            ProcedureKind::EToad => "e-toad",
            ProcedureKind::BoostPlus => "boost-plus",
            ProcedureKind::BoostMinus => "boost-minus",
            ProcedureKind::LocalPlus => "local-plus",
            ProcedureKind::LocalMinus => "local-minus",
            ProcedureKind::OnlineBh => "obh",
            ProcedureKind::Lond => "lond",
            ProcedureKind::RLond => "r-lond",
            ProcedureKind::OnlineBr => "obr",
            ProcedureKind::Toad => "toad",
            ProcedureKind::OnlineSbh => "osbh",
            ProcedureKind::Lord => "lord",
            ProcedureKind::Saffron => "saffron",
        }
    }

    pub fn score_kind(self) -> ScoreKind {
        use ProcedureKind::*;
        match self {
            OnlineEbh | ELond | EToad | BoostPlus | BoostMinus | LocalPlus | LocalMinus => ScoreKind::EValue,
            _ => ScoreKind::PValue,
        }
    }

    pub fn is_boosted(self) -> bool {
        use ProcedureKind::*;
        matches!(self, BoostPlus | BoostMinus | LocalPlus | LocalMinus)
    }

    /// Whether the procedure is ARC (rejections can arrive late).
    pub fn is_arc(self) -> bool {
        use ProcedureKind::*;
        !matches!(self, ELond | Lond | RLond | Lord | Saffron)
    }

    /// Procedures whose rejection set is checked for `|R_t| = k_t*` and
    /// self-consistency at every step.
    pub fn is_self_consistent_type(self) -> bool {
        matches!(self, ProcedureKind::OnlineEbh | ProcedureKind::OnlineBh)
    }
}

impl fmt::Display for ProcedureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProcedureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProcedureKind::ALL.into_iter().find(|p| p.name() == s).ok_or(Error::InvalidParameter {
            name: "procedure",
            value: f64::NAN,
            reason: "unknown procedure name",
        })
    }
}

/// A procedure with an optional per-procedure weight parameter `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RosterEntry {
    pub kind: ProcedureKind,
    pub q: Option<f64>,
}

impl RosterEntry {
    pub fn new(kind: ProcedureKind) -> Self {
        RosterEntry { kind, q: None }
    }

    pub fn with_q(kind: ProcedureKind, q: f64) -> Self {
        RosterEntry { kind, q: Some(q) }
    }

    /// `name` or `name@q`.
    pub fn label(&self) -> String {
        match self.q {
            Some(q) => alloc::format!("{}@{}", self.kind, q),
            None => String::from(self.kind.name()),
        }
    }

    pub fn effective_q(&self, default: f64) -> f64 {
        self.q.unwrap_or(default)
    }
}

/// Parses a comma-separated list such as `oe-bh,e-lond`, `obh@0.999,lord`
/// or `all`.
pub fn parse_roster(spec: &str) -> Result<Vec<RosterEntry>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item == "all" {
            out.extend(ProcedureKind::ALL.into_iter().map(RosterEntry::new));
            continue;
        }
        let entry = match item.split_once('@') {
            Some((name, q)) => {
                let q: f64 = q.parse().map_err(|_| Error::InvalidParameter {
                    name: "q",
                    value: f64::NAN,
                    reason: "override after '@' is not a number",
                })?;
                if !(q > 0.0 && q < 1.0) {
                    return Err(Error::InvalidParameter { name: "q", value: q, reason: "must lie in (0, 1)" });
                }
                RosterEntry::with_q(name.parse()?, q)
            }
            None => RosterEntry::new(item.parse()?),
        };
        out.push(entry);
    }
    if out.is_empty() {
        return Err(Error::EmptyInput("the procedure roster is empty"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names_and_overrides() {
        let r = parse_roster("oe-bh, obh@0.999,lord").unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[1], RosterEntry::with_q(ProcedureKind::OnlineBh, 0.999));
        assert_eq!(r[1].label(), "obh@0.999");
        assert_eq!(parse_roster("all").unwrap().len(), ProcedureKind::ALL.len());
        assert!(parse_roster("bogus").is_err());
        assert!(parse_roster("obh@1.5").is_err());
        assert!(parse_roster("").is_err());
    }

    #[test]
    fn names_round_trip() {
        for p in ProcedureKind::ALL {
            assert_eq!(p.name().parse::<ProcedureKind>().unwrap(), p);
        }
    }
}
