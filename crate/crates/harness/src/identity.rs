use std::fmt;
use std::str::FromStr;

use crate::HarnessError;

macro_rules! identities {
    ($($variant:ident => $name:literal,)*) => {
        /// Every identity the harness can sample and check.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Identity {
            $($variant,)*
        }

        impl Identity {
            pub const ALL: &'static [Identity] = &[$(Identity::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Identity::$variant => $name,)*
                }
            }
        }

        impl FromStr for Identity {
            type Err = HarnessError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok(Identity::$variant),)*
                    _ => Err(HarnessError::UnknownIdentity(s.to_string())),
                }
            }
        }
    };
}

identities! {
    ThetaInversion => "theta-inversion",
    ThetaQuasiperiod => "theta-quasiperiod",
    ThetaAddition => "theta-addition",
    Epdi => "epdi",
    Epi => "epi",
    Xsk => "xsk",
    Wmi => "wmi",
    Pmi => "pmi",
    GInverse => "g-inverse",
    Dpf => "dpf",
    Mipf => "mipf",
    MipfRelabel => "mipf-relabel",
    Apf => "apf",
    Operator => "operator",
    Kmt => "kmt",
    KmtDpf => "kmt-dpf",
    KmtUnitY => "kmt-unit-y",
    Atr => "atr",
    AtrApf => "atr-apf",
    Kmsi => "kmsi",
    Wbb => "wbb",
    WbbMbkms => "wbb-mbkms",
    Trc => "trc",
    TrcMbkms => "trc-mbkms",
    Mbkms => "mbkms",
    Akmt => "akmt",
    AkmtRoots => "akmt-roots",
    Akms => "akms",
    AkmtAkms => "akmt-akms",
    ThetaSplit => "theta-split",
    Bracket => "bracket",
    Induction => "induction",
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses `all` or a comma-separated list of names.
pub fn parse_selection(text: &str) -> Result<Vec<Identity>, HarnessError> {
    if text == "all" {
        return Ok(Identity::ALL.to_vec());
    }
    let mut out: Vec<Identity> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}
