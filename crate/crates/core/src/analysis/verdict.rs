/// Direction in which the Renyi entropies move along the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// All `S_α` non-decreasing from `g` to `g + ε`.
    Up,
    /// All `S_α` non-increasing from `g` to `g + ε`.
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    ConvertibleUp,
    ConvertibleDown,
    ConvertibleWithCatalyst(Direction),
    NotLocallyConvertible,
}

impl Verdict {
    pub fn code(&self) -> &'static str {
        match self {
            Verdict::ConvertibleUp => "convertible-up",
            Verdict::ConvertibleDown => "convertible-down",
            Verdict::ConvertibleWithCatalyst(Direction::Up) => "catalyst-up",
            Verdict::ConvertibleWithCatalyst(Direction::Down) => "catalyst-down",
            Verdict::NotLocallyConvertible => "not-convertible",
        }
    }

    pub fn needs_catalyst(&self) -> bool {
        matches!(self, Verdict::ConvertibleWithCatalyst(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct Evidence {
    pub dlc_positive: usize,
    pub dlc_negative: usize,
    pub majorization_positive: usize,
    pub majorization_negative: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub evidence: Evidence,
    /// No strict DLC sign anywhere in the column.
    pub degenerate: bool,
}

fn count(col: &[i8]) -> (usize, usize) {
    (
        col.iter().filter(|&&s| s > 0).count(),
        col.iter().filter(|&&s| s < 0).count(),
    )
}

/// Mixed DLC signs rule out local conversion; otherwise the majorization
/// column decides whether a catalyst is required.
pub fn catalyst_verdict(dlc: &[i8], majorization: &[i8]) -> VerdictReport {
    let (dp, dn) = count(dlc);
    let (mp, mn) = count(majorization);
    let evidence = Evidence {
        dlc_positive: dp,
        dlc_negative: dn,
        majorization_positive: mp,
        majorization_negative: mn,
    };
    let verdict = if dp > 0 && dn > 0 {
        Verdict::NotLocallyConvertible
    } else {
        let dir = if dn > 0 {
            Direction::Down
        } else {
            Direction::Up
        };
        match (mp > 0 && mn > 0, dir) {
            (true, d) => Verdict::ConvertibleWithCatalyst(d),
            (false, Direction::Up) => Verdict::ConvertibleUp,
            (false, Direction::Down) => Verdict::ConvertibleDown,
        }
    };
    VerdictReport {
        verdict,
        evidence,
        degenerate: dp == 0 && dn == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_zero_is_degenerate_up() {
        let r = catalyst_verdict(&[0, 0, 0], &[0, 0]);
        assert_eq!(r.verdict, Verdict::ConvertibleUp);
        assert!(r.degenerate);
        assert_eq!(r.evidence, Evidence::default());
    }

    #[test]
    fn mixed_dlc_wins() {
        let r = catalyst_verdict(&[1, -1, 0], &[1, 1, 0]);
        assert_eq!(r.verdict, Verdict::NotLocallyConvertible);
        let r = catalyst_verdict(&[1, -1], &[1, -1]);
        assert_eq!(r.verdict, Verdict::NotLocallyConvertible);
    }

    #[test]
    fn uniform_dlc_with_mixed_majorization_needs_catalyst() {
        let r = catalyst_verdict(&[1, 1, 0], &[1, -1, 0]);
        assert_eq!(r.verdict, Verdict::ConvertibleWithCatalyst(Direction::Up));
        assert!(r.verdict.needs_catalyst());
        let r = catalyst_verdict(&[-1, -1], &[-1, 1, 0]);
        assert_eq!(r.verdict, Verdict::ConvertibleWithCatalyst(Direction::Down));
    }

    #[test]
    fn uniform_everything_is_catalyst_free() {
        assert_eq!(
            catalyst_verdict(&[-1, -1], &[1, 1, 0]).verdict,
            Verdict::ConvertibleDown
        );
        assert_eq!(
            catalyst_verdict(&[1, 0], &[-1, 0]).verdict,
            Verdict::ConvertibleUp
        );
    }
}
