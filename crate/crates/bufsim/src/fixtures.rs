//! The named example instances shipped with the crate.
//!
//! Each constructor builds one automaton or trace alphabet; [`FixtureId`]
//! maps the CLI-visible names onto them. The instances cover the behaviours
//! the test suite pins down: a three-buffer game with mixed capacities
//! (`ex31`), a family whose winner flips at a known capacity (`thm33`), and
//! two pairs where the inclusion holds but no finite capacity certifies it
//! (`sec5ex`, `ex54`).

use thiserror::Error;

use crate::automata::Nba;
use crate::traces::TraceAlphabet;

/// Two components `{a,b}` and `{b,c}`: only `b` is shared, so `a` and `c`
/// commute freely.
pub fn ex21_sigma() -> TraceAlphabet {
    TraceAlphabet::new(vec![vec!['a', 'b'], vec!['b', 'c']]).unwrap()
}

/// Three components `{a,b}`, `{b}`, `{c}` for the [`ex31_a`]/[`ex31_b`]
/// pair.
pub fn ex31_sigma() -> TraceAlphabet {
    TraceAlphabet::new(vec![vec!['a', 'b'], vec!['b'], vec!['c']]).unwrap()
}

/// Four states: two forced `b`s, then an `a`-loop left only by `c`, with
/// `a` returning from the accepting state.
pub fn ex31_a() -> Nba {
    Nba::new(
        "ex31_A",
        vec!["s0", "s1", "s2", "s3"],
        vec!['a', 'b', 'c'],
        "s0",
        &[
            ("s0", 'b', "s1"),
            ("s1", 'b', "s2"),
            ("s2", 'a', "s2"),
            ("s2", 'c', "s3"),
            ("s3", 'a', "s2"),
        ],
        &["s3"],
    )
    .unwrap()
}

/// Five states reading `c b b` and then alternating `c`/`a` through the
/// accepting state: the same traces as [`ex31_a`] modulo commuting
/// letters.
pub fn ex31_b() -> Nba {
    Nba::new(
        "ex31_B",
        vec!["t0", "t1", "t2", "t3", "t4"],
        vec!['a', 'b', 'c'],
        "t0",
        &[
            ("t0", 'c', "t1"),
            ("t1", 'b', "t2"),
            ("t2", 'b', "t3"),
            ("t3", 'c', "t4"),
            ("t4", 'a', "t3"),
        ],
        &["t3"],
    )
    .unwrap()
}

/// Fully independent `a` and `b`, one buffer each.
pub fn thm33_sigma() -> TraceAlphabet {
    TraceAlphabet::new(vec![vec!['a'], vec!['b']]).unwrap()
}

/// The cycle `a^{n+1} b`: `n+1` forced `a`-steps, then `b` back to the
/// accepting initial state.
///
/// Against [`thm33_b`] of the same parameter, Spoiler wins with buffer
/// capacities `(n, 0)` and Duplicator with `(n+1, 0)`: Duplicator cannot
/// answer any `a` before the `b` arrives, so the first buffer must hold
/// all `n+1` of them.
pub fn thm33_a(n: u32) -> Nba {
    cycle_nba(&format!("thm33_A_{n}"), "p", n, CycleOrder::LettersThenB)
}

/// The cycle `b a^{n+1}`: the same letters as [`thm33_a`] per round, read
/// in the opposite order.
pub fn thm33_b(n: u32) -> Nba {
    cycle_nba(&format!("thm33_B_{n}"), "r", n, CycleOrder::BThenLetters)
}

enum CycleOrder {
    /// `a^{n+1}` then `b`.
    LettersThenB,
    /// `b` then `a^{n+1}`.
    BThenLetters,
}

fn cycle_nba(name: &str, prefix: &str, n: u32, order: CycleOrder) -> Nba {
    let len = n as usize + 2;
    let states: Vec<String> = (0..len).map(|i| format!("{prefix}{i}")).collect();
    let mut letters: Vec<char> = vec!['a'; len - 1];
    match order {
        CycleOrder::LettersThenB => letters.push('b'),
        CycleOrder::BThenLetters => letters.insert(0, 'b'),
    }
    let transitions: Vec<(&str, char, &str)> = (0..len)
        .map(|i| {
            (
                states[i].as_str(),
                letters[i],
                states[(i + 1) % len].as_str(),
            )
        })
        .collect();
    Nba::new(
        name,
        states.iter().map(String::as_str).collect(),
        vec!['a', 'b'],
        &states[0],
        &transitions,
        &[states[0].as_str()],
    )
    .unwrap()
}

/// One component containing both `a` and `b`.
pub fn sec5ex_sigma() -> TraceAlphabet {
    TraceAlphabet::single(&['a', 'b'])
}

/// Accepting `a`-loop that any `b` exits for good: the automaton accepts
/// exactly the all-`a` word.
pub fn sec5ex_a() -> Nba {
    Nba::new(
        "sec5ex_A",
        vec!["p0", "p1"],
        vec!['a', 'b'],
        "p0",
        &[("p0", 'a', "p0"), ("p0", 'b', "p1"), ("p1", 'b', "p1")],
        &["p0"],
    )
    .unwrap()
}

/// Accepts the all-`a` word too, but only by eventually committing to the
/// accepting `a`-loop — a commitment Duplicator cannot revoke when a `b`
/// arrives later, which is why no finite buffer suffices against
/// [`sec5ex_a`].
pub fn sec5ex_b() -> Nba {
    Nba::new(
        "sec5ex_B",
        vec!["q0", "q1", "q2"],
        vec!['a', 'b'],
        "q0",
        &[
            ("q0", 'a', "q0"),
            ("q0", 'a', "q1"),
            ("q0", 'b', "q2"),
            ("q1", 'a', "q1"),
            ("q2", 'b', "q2"),
        ],
        &["q1"],
    )
    .unwrap()
}

/// Independent `a` and `b` again, one buffer each.
pub fn ex54_sigma() -> TraceAlphabet {
    TraceAlphabet::new(vec![vec!['a'], vec!['b']]).unwrap()
}

/// Any number of `b`s, one `a`, then `b`s forever.
pub fn ex54_a() -> Nba {
    Nba::new(
        "ex54_A",
        vec!["u0", "u1"],
        vec!['a', 'b'],
        "u0",
        &[("u0", 'b', "u0"), ("u0", 'a', "u1"), ("u1", 'b', "u1")],
        &["u1"],
    )
    .unwrap()
}

/// The single word `a b^ω` — trace-equivalent to everything [`ex54_a`]
/// accepts, yet Duplicator must buffer every early `b`, so no finite
/// capacity wins against it.
pub fn ex54_b() -> Nba {
    Nba::new(
        "ex54_B",
        vec!["v0", "v1"],
        vec!['a', 'b'],
        "v0",
        &[("v0", 'a', "v1"), ("v1", 'b', "v1")],
        &["v1"],
    )
    .unwrap()
}

/// Errors from [`FixtureId::parse`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`; available: {}", FixtureId::NAMES.join(", "))]
    Unknown(String),
    #[error("fixture `{0}` needs a parameter")]
    MissingParam(String),
    #[error("fixture `{0}` takes no parameter")]
    UnexpectedParam(String),
}

/// What a fixture name denotes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fixture {
    Automaton(Nba),
    Alphabet(TraceAlphabet),
}

impl Fixture {
    pub fn to_text(&self) -> String {
        match self {
            Fixture::Automaton(nba) => nba.to_text(),
            Fixture::Alphabet(sigma) => sigma.to_text(),
        }
    }
}

/// A parsed fixture name, with the parameter where the family needs one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureId {
    Ex21Sigma,
    Ex31Sigma,
    Ex31A,
    Ex31B,
    Thm33Sigma,
    Thm33A(u32),
    Thm33B(u32),
    Sec5exSigma,
    Sec5exA,
    Sec5exB,
    Ex54Sigma,
    Ex54A,
    Ex54B,
}

impl FixtureId {
    /// Every accepted name, in a stable listing order.
    pub const NAMES: &'static [&'static str] = &[
        "ex21_sigma",
        "ex31_sigma",
        "ex31_A",
        "ex31_B",
        "thm33_sigma",
        "thm33_A",
        "thm33_B",
        "sec5ex_sigma",
        "sec5ex_A",
        "sec5ex_B",
        "ex54_sigma",
        "ex54_A",
        "ex54_B",
    ];

    /// Resolves a name plus optional parameter; the `thm33` automata
    /// require the parameter, everything else rejects one.
    pub fn parse(name: &str, param: Option<u32>) -> Result<FixtureId, FixtureError> {
        let id = match (name, param) {
            ("thm33_A", Some(n)) => FixtureId::Thm33A(n),
            ("thm33_B", Some(n)) => FixtureId::Thm33B(n),
            ("thm33_A" | "thm33_B", None) => {
                return Err(FixtureError::MissingParam(name.to_string()))
            }
            (_, Some(_)) if FixtureId::NAMES.contains(&name) => {
                return Err(FixtureError::UnexpectedParam(name.to_string()))
            }
            ("ex21_sigma", None) => FixtureId::Ex21Sigma,
            ("ex31_sigma", None) => FixtureId::Ex31Sigma,
            ("ex31_A", None) => FixtureId::Ex31A,
            ("ex31_B", None) => FixtureId::Ex31B,
            ("thm33_sigma", None) => FixtureId::Thm33Sigma,
            ("sec5ex_sigma", None) => FixtureId::Sec5exSigma,
            ("sec5ex_A", None) => FixtureId::Sec5exA,
            ("sec5ex_B", None) => FixtureId::Sec5exB,
            ("ex54_sigma", None) => FixtureId::Ex54Sigma,
            ("ex54_A", None) => FixtureId::Ex54A,
            ("ex54_B", None) => FixtureId::Ex54B,
            _ => return Err(FixtureError::Unknown(name.to_string())),
        };
        Ok(id)
    }

    pub fn build(&self) -> Fixture {
        match *self {
            FixtureId::Ex21Sigma => Fixture::Alphabet(ex21_sigma()),
            FixtureId::Ex31Sigma => Fixture::Alphabet(ex31_sigma()),
            FixtureId::Ex31A => Fixture::Automaton(ex31_a()),
            FixtureId::Ex31B => Fixture::Automaton(ex31_b()),
            FixtureId::Thm33Sigma => Fixture::Alphabet(thm33_sigma()),
            FixtureId::Thm33A(n) => Fixture::Automaton(thm33_a(n)),
            FixtureId::Thm33B(n) => Fixture::Automaton(thm33_b(n)),
            FixtureId::Sec5exSigma => Fixture::Alphabet(sec5ex_sigma()),
            FixtureId::Sec5exA => Fixture::Automaton(sec5ex_a()),
            FixtureId::Sec5exB => Fixture::Automaton(sec5ex_b()),
            FixtureId::Ex54Sigma => Fixture::Alphabet(ex54_sigma()),
            FixtureId::Ex54A => Fixture::Automaton(ex54_a()),
            FixtureId::Ex54B => Fixture::Automaton(ex54_b()),
        }
    }

    /// The file a fixture is written to: `.nba` for automata, `.sigma` for
    /// alphabets, with the parameter baked into the name.
    pub fn file_name(&self) -> String {
        match *self {
            FixtureId::Ex21Sigma => "ex21_sigma.sigma".into(),
            FixtureId::Ex31Sigma => "ex31_sigma.sigma".into(),
            FixtureId::Ex31A => "ex31_A.nba".into(),
            FixtureId::Ex31B => "ex31_B.nba".into(),
            FixtureId::Thm33Sigma => "thm33_sigma.sigma".into(),
            FixtureId::Thm33A(n) => format!("thm33_A_{n}.nba"),
            FixtureId::Thm33B(n) => format!("thm33_B_{n}.nba"),
            FixtureId::Sec5exSigma => "sec5ex_sigma.sigma".into(),
            FixtureId::Sec5exA => "sec5ex_A.nba".into(),
            FixtureId::Sec5exB => "sec5ex_B.nba".into(),
            FixtureId::Ex54Sigma => "ex54_sigma.sigma".into(),
            FixtureId::Ex54A => "ex54_A.nba".into(),
            FixtureId::Ex54B => "ex54_B.nba".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Lasso;
    use crate::traces::closure_member;

    fn automaton_ids() -> Vec<FixtureId> {
        vec![
            FixtureId::Ex31A,
            FixtureId::Ex31B,
            FixtureId::Thm33A(1),
            FixtureId::Thm33B(1),
            FixtureId::Thm33A(3),
            FixtureId::Thm33B(3),
            FixtureId::Sec5exA,
            FixtureId::Sec5exB,
            FixtureId::Ex54A,
            FixtureId::Ex54B,
        ]
    }

    #[test]
    fn printed_fixtures_reparse_to_equal_structures() {
        for id in automaton_ids() {
            let Fixture::Automaton(nba) = id.build() else {
                panic!("automaton id");
            };
            assert_eq!(Nba::parse(&nba.to_text()).unwrap(), nba, "{id:?}");
        }
        for id in [
            FixtureId::Ex21Sigma,
            FixtureId::Ex31Sigma,
            FixtureId::Thm33Sigma,
            FixtureId::Sec5exSigma,
            FixtureId::Ex54Sigma,
        ] {
            let Fixture::Alphabet(sigma) = id.build() else {
                panic!("alphabet id");
            };
            assert_eq!(TraceAlphabet::parse(&sigma.to_text()).unwrap(), sigma);
        }
    }

    #[test]
    fn shapes_are_frozen() {
        let b = ex31_b();
        assert_eq!(b.state_count(), 5);
        assert_eq!(b.transition_count(), 5);
        assert_eq!(b.accepting().len(), 1);
        let a = ex31_a();
        assert_eq!(a.state_count(), 4);
        assert_eq!(a.transition_count(), 5);

        // Parameter n yields n+1 forced `a`-steps before the `b`.
        let t = thm33_a(3);
        assert_eq!(t.state_count(), 5);
        let a_steps = t
            .transitions()
            .iter()
            .filter(|&&(_, c, _)| c == 'a')
            .count();
        assert_eq!(a_steps, 4);
        let u = thm33_b(3);
        assert_eq!(u.state_count(), 5);
        assert_eq!(u.transition_count(), 5);
    }

    #[test]
    fn fixture_languages_spot_checks() {
        let a = ex31_a();
        let b = ex31_b();
        assert!(a.accepts_lasso(&Lasso::parse("bb/ca").unwrap()).unwrap());
        assert!(!a.accepts_lasso(&Lasso::parse("bb/a").unwrap()).unwrap());
        assert!(b.accepts_lasso(&Lasso::parse("cbb/ca").unwrap()).unwrap());
        assert!(!b.accepts_lasso(&Lasso::parse("bb/ca").unwrap()).unwrap());
        // The two accepted words differ only in the order of independent
        // letters, so each lies in the closure of the other's language.
        let sigma = ex31_sigma();
        assert!(closure_member(&sigma, &Lasso::parse("bb/ca").unwrap(), &b).unwrap());

        let sa = sec5ex_a();
        let sb = sec5ex_b();
        assert!(sa.accepts_lasso(&Lasso::parse("/a").unwrap()).unwrap());
        assert!(!sa.accepts_lasso(&Lasso::parse("a/b").unwrap()).unwrap());
        assert!(sb.accepts_lasso(&Lasso::parse("/a").unwrap()).unwrap());
        assert!(!sb.accepts_lasso(&Lasso::parse("a/b").unwrap()).unwrap());

        let ea = ex54_a();
        let eb = ex54_b();
        assert!(ea.accepts_lasso(&Lasso::parse("bba/b").unwrap()).unwrap());
        assert!(!ea.accepts_lasso(&Lasso::parse("/b").unwrap()).unwrap());
        assert!(eb.accepts_lasso(&Lasso::parse("a/b").unwrap()).unwrap());
        assert!(!eb.accepts_lasso(&Lasso::parse("ba/b").unwrap()).unwrap());
        assert!(closure_member(&ex54_sigma(), &Lasso::parse("bba/b").unwrap(), &eb).unwrap());
    }

    #[test]
    fn name_parsing_and_files() {
        assert_eq!(
            FixtureId::parse("ex31_A", None).unwrap(),
            FixtureId::Ex31A
        );
        assert_eq!(
            FixtureId::parse("thm33_B", Some(2)).unwrap(),
            FixtureId::Thm33B(2)
        );
        assert_eq!(
            FixtureId::parse("thm33_A", None),
            Err(FixtureError::MissingParam("thm33_A".into()))
        );
        assert_eq!(
            FixtureId::parse("ex31_A", Some(1)),
            Err(FixtureError::UnexpectedParam("ex31_A".into()))
        );
        let err = FixtureId::parse("nope", None).unwrap_err();
        assert_eq!(err, FixtureError::Unknown("nope".into()));
        assert!(err.to_string().contains("ex31_A"), "{err}");
        assert!(err.to_string().contains("thm33_B"), "{err}");

        assert_eq!(FixtureId::Thm33A(2).file_name(), "thm33_A_2.nba");
        assert_eq!(FixtureId::Ex21Sigma.file_name(), "ex21_sigma.sigma");
        for name in FixtureId::NAMES {
            let param = if name.starts_with("thm33_A") || name.starts_with("thm33_B") {
                Some(1)
            } else {
                None
            };
            let id = FixtureId::parse(name, param).unwrap();
            assert!(!id.file_name().is_empty());
        }
    }
}
