//! The printed case tables and their mechanical check.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{
    auxiliary_cases, classify, format_missing, initial_split, parse_set, reduce_to, renaming, split_on_edge,
    CaseError, CaseState, Classification, SplitCase,
};
use crate::parallel::{map_items, Execution};
use crate::whitehead::{RestrictionSet, WhiteheadEdge};
use crate::words::GroupHom;

/// How a row's problem is obtained.
#[derive(Clone, Copy, Debug)]
pub enum Origin {
    /// One of the four cases of the change of coordinates.
    Initial,
    /// The cases `x` and `x'`, given by their graphs directly.
    Auxiliary,
    /// The parent with one more restriction.
    Derived { parent: &'static str, extra: &'static str },
    /// A subcase of splitting `parent` on `edge`, identified by its substitution
    /// (moved generators only).
    Split { parent: &'static str, edge: &'static str, substitution: &'static [(&'static str, &'static str)] },
}

/// The comment column.
#[derive(Clone, Copy, Debug)]
pub enum Expect {
    /// No claim.
    Nothing,
    /// `✓`: injective with an empty missing set.
    Check,
    /// Still ambiguous; split further.
    Ambiguous,
    /// Reduces to `target` under the renaming `via`. `amended` is a renaming tried
    /// and reported alongside when the printed one fails; it never affects the result.
    Contained {
        target: &'static str,
        via: &'static [(&'static str, &'static str)],
        amended: Option<&'static [(&'static str, &'static str)]>,
    },
    /// Reduces to `target` and back under the identity.
    Equivalent(&'static str),
    /// Justified outside the engine.
    Note(&'static str),
}

#[derive(Clone, Copy, Debug)]
pub struct TableRow {
    pub id: &'static str,
    pub origin: Origin,
    /// Restrictions as printed.
    pub printed_n: &'static str,
    /// `W \ N` as printed, when the row prints one.
    pub printed_missing: Option<&'static str>,
    pub expect: Expect,
}

const fn split(
    parent: &'static str,
    edge: &'static str,
    substitution: &'static [(&'static str, &'static str)],
) -> Origin {
    Origin::Split { parent, edge, substitution }
}

const fn row(
    id: &'static str,
    origin: Origin,
    printed_n: &'static str,
    printed_missing: Option<&'static str>,
    expect: Expect,
) -> TableRow {
    TableRow { id, origin, printed_n, printed_missing, expect }
}

const EMPTY: Option<&str> = Some("∅");

pub const TABLE: &[TableRow] = &[
    row("1", Origin::Initial, "u.u^-1", None, Expect::Nothing),
    row("2", Origin::Initial, "y.u^-1, u.y, u.u^-1", None, Expect::Nothing),
    row("3", Origin::Initial, "v.u^-1, u.v^-1", None, Expect::Nothing),
    row("4", Origin::Initial, "v.u^-1, u.v^-1, y.v^-1, u.y", None, Expect::Nothing),
    row(
        "2'",
        Origin::Derived { parent: "2", extra: "u^-1.y^-1" },
        "u.y, y.u^-1, u^-1.y^-1, u.u^-1",
        Some("u.y^-1"),
        Expect::Note("triangle rule and symmetry"),
    ),
    row(
        "2.1",
        split("2'", "u.y^-1", &[]),
        "u.y, y.u^-1, u.y^-1, u.u^-1, u^-1.y^-1",
        EMPTY,
        Expect::Check,
    ),
    row(
        "2.2",
        split("2'", "u.y^-1", &[("u", "u t"), ("y", "t^-1 y")]),
        "t.y, y.u^-1, t.u^-1, u.t^-1, u.y^-1, t^-1.y^-1",
        EMPTY,
        Expect::Check,
    ),
    row(
        "2.3",
        split("2'", "u.y^-1", &[("u", "u y^-1")]),
        "u.y, y.u^-1, u^-1.y^-1, y.y^-1",
        Some("u.u^-1, u.y^-1"),
        Expect::Contained {
            target: "3",
            via: &[("u", "u"), ("v", "y^-1")],
            amended: Some(&[("u", "y^-1"), ("v", "u")]),
        },
    ),
    row(
        "2.4",
        split("2'", "u.y^-1", &[("y", "u^-1 y")]),
        "u.u^-1, y.u^-1, u^-1.y^-1, u.y",
        Some("u.y^-1"),
        Expect::Equivalent("2'"),
    ),
    row(
        "4'",
        Origin::Derived { parent: "4", extra: "u^-1.y^-1" },
        "v.u^-1, u.v^-1, y.v^-1, u.y, u^-1.y^-1",
        Some("v.y^-1"),
        Expect::Note("triangle rule and symmetry"),
    ),
    row(
        "4.1",
        split("4'", "v.y^-1", &[]),
        "v.u^-1, u.v^-1, y.v^-1, u.y, u^-1.y^-1, v.y^-1",
        EMPTY,
        Expect::Check,
    ),
    row(
        "4.2",
        split("4'", "v.y^-1", &[("v", "v t"), ("y", "t^-1 y")]),
        "t.u^-1, u.v^-1, y.v^-1, u^-1.y^-1, t^-1.y^-1, v.y^-1, v.t^-1",
        EMPTY,
        Expect::Contained { target: "2.2", via: &[("u", "v"), ("t", "t u")], amended: None },
    ),
    row(
        "4.3",
        split("4'", "v.y^-1", &[("v", "v y^-1")]),
        "y^-1.u^-1, y.v^-1, u.v^-1, v.y, u.y",
        Some("v.v^-1, v.u"),
        Expect::Contained { target: "3", via: &[("u", "y^-1 u"), ("v", "v")], amended: None },
    ),
    row(
        "4.4",
        split("4'", "v.y^-1", &[("y", "v^-1 y")]),
        "v.u^-1, u.v^-1, y.v^-1, u.y, v^-1.y^-1",
        Some("u.y^-1"),
        Expect::Contained { target: "2", via: &[("u", "v u"), ("y", "y")], amended: None },
    ),
    row(
        "3.1",
        split("3", "u.v", &[]),
        "v.u^-1, u.v^-1, u.v",
        Some("u.u^-1, v.v^-1, v^-1.u^-1"),
        Expect::Ambiguous,
    ),
    row(
        "3.2",
        split("3", "u.v", &[("u", "u t"), ("v", "v t")]),
        "t.u^-1, t.v^-1, v.t^-1, u.t^-1, u.v",
        Some("v^-1.u^-1"),
        Expect::Contained { target: "x'", via: &[("x", "t")], amended: None },
    ),
    row(
        "3.3",
        split("3", "u.v", &[("u", "u v")]),
        "v.u^-1, v.v^-1, u.v^-1",
        Some("u.v, v^-1.u^-1"),
        Expect::Contained { target: "x", via: &[("x", "v")], amended: None },
    ),
    row(
        "3.4",
        split("3", "u.v", &[("v", "v u")]),
        "u.u^-1, u.v^-1, v.u^-1",
        Some("u.v, v^-1.u^-1"),
        Expect::Contained { target: "x", via: &[("x", "u")], amended: None },
    ),
    row(
        "x",
        Origin::Auxiliary,
        "v.u^-1, u.v^-1, x.v^-1, x.u^-1, u.x^-1, v.x^-1",
        Some("u.v, v^-1.u^-1"),
        Expect::Nothing,
    ),
    row(
        "x'",
        Origin::Auxiliary,
        "t.u^-1, t.v^-1, v.t^-1, u.t^-1, x.u^-1, x.v^-1, x^-1.u, x^-1.v, u.v",
        Some("v^-1.u^-1"),
        Expect::Nothing,
    ),
    row(
        "x.1",
        split("x", "u.v", &[]),
        "v.u^-1, u.v^-1, x.v^-1, x.u^-1, u.x^-1, v.x^-1, u.v",
        Some("u^-1.v^-1"),
        Expect::Ambiguous,
    ),
    row(
        "x.2",
        split("x", "u.v", &[("u", "u t"), ("v", "v t")]),
        "t.u^-1, t.v^-1, x.v^-1, x.u^-1, t.x^-1, t.x^-1, v.t^-1, u.t^-1, u.v",
        Some("u^-1.v^-1"),
        Expect::Contained { target: "x'", via: &[("x", "t x")], amended: None },
    ),
    row(
        "x.3",
        split("x", "u.v", &[("v", "v u")]),
        "u.u^-1, u.v^-1, x.v^-1, x.u^-1, u.x^-1, v.u^-1",
        Some("u.v, v^-1.u^-1"),
        Expect::Contained { target: "x", via: &[("x", "u x")], amended: None },
    ),
    row(
        "x.4",
        split("x", "u.v", &[("u", "u v")]),
        "v.u^-1, v.v^-1, x.v^-1, x.u^-1, v.x^-1, u.v^-1",
        Some("u.v, v^-1.u^-1"),
        Expect::Contained { target: "x", via: &[("x", "v x")], amended: None },
    ),
    row("x.5", split("x", "u.v", &[("v", "u")]), "u.u^-1, u.x^-1, x.u^-1", EMPTY, Expect::Check),
    row(
        "x.1.1",
        split("x.1", "u^-1.v^-1", &[]),
        "v.u^-1, u.v^-1, x.v^-1, x.u^-1, u.x^-1, v.x^-1, u.v, u^-1.v^-1",
        EMPTY,
        Expect::Check,
    ),
    row(
        "x.1.2",
        split("x.1", "u^-1.v^-1", &[("u", "t u"), ("v", "t v")]),
        "v.t^-1, u.t^-1, x.t^-1, x.t^-1, u.x^-1, v.x^-1, u.v, t.u^-1, t.v^-1, u^-1.v^-1",
        EMPTY,
        Expect::Contained { target: "x'.1", via: &[("x", "x t")], amended: None },
    ),
    row(
        "x.1.3",
        split("x.1", "u^-1.v^-1", &[("v", "u v")]),
        "v.u^-1, u.u^-1, x.u^-1, u.v^-1, u.x^-1, v.x^-1, u.v",
        Some("u^-1.v^-1"),
        Expect::Contained { target: "x.1", via: &[("x", "x u")], amended: None },
    ),
    row(
        "x.1.4",
        split("x.1", "u^-1.v^-1", &[("u", "v u")]),
        "v.v^-1, u.v^-1, x.v^-1, u.x^-1, v.x^-1, u.v, v.u^-1",
        Some("u^-1.v^-1"),
        Expect::Contained { target: "x.1", via: &[("x", "x v")], amended: None },
    ),
    row(
        "x'.1",
        split("x'", "v^-1.u^-1", &[]),
        "t.u^-1, t.v^-1, v.t^-1, u.t^-1, u.v, x.v^-1, x.u^-1, u.x^-1, v.x^-1, v^-1.u^-1",
        Some("v^-1.u^-1"),
        Expect::Check,
    ),
    row(
        "x'.2",
        split("x'", "v^-1.u^-1", &[("u", "s u"), ("v", "s v")]),
        "t.s^-1, t.s^-1, v.t^-1, u.t^-1, u.v, x.s^-1, x.s^-1, u.x^-1, v.x^-1, v^-1.u^-1, s.v^-1, s.u^-1",
        EMPTY,
        Expect::Contained {
            target: "x'.1",
            via: &[("x", "x s"), ("u", "t s")],
            amended: Some(&[("x", "x s"), ("t", "t s")]),
        },
    ),
    row(
        "x'.3",
        split("x'", "v^-1.u^-1", &[("v", "u v")]),
        "t.u^-1, u.v^-1, v.t^-1, u.t^-1, u.v, x.u^-1, v.x^-1, u.x^-1",
        Some("v^-1.u^-1"),
        Expect::Contained { target: "x.1", via: &[("x", "x u"), ("u", "t u")], amended: None },
    ),
    row(
        "x'.4",
        split("x'", "v^-1.u^-1", &[("u", "v u")]),
        "t.v^-1, v.u^-1, v.t^-1, u.t^-1, x.v^-1, u.v, x^-1.u, x^-1.v",
        Some("v^-1.u^-1"),
        Expect::Contained { target: "x.1", via: &[("x", "x v"), ("v", "t v")], amended: None },
    ),
    row(
        "3.1.1",
        split("3.1", "v^-1.u^-1", &[]),
        "v.u^-1, u.v^-1, v.v^-1, u.v",
        Some("u.u^-1, v.v^-1"),
        Expect::Ambiguous,
    ),
    row(
        "3.1.1.2",
        split("3.1.1", "v.v^-1", &[("v", "t^-1 v t")]),
        "t.u^-1, u.t, v.v^-1, v.t^-1, t^-1.v",
        Some("u.u^-1"),
        Expect::Ambiguous,
    ),
    row(
        "3.1.1.2.1",
        split("3.1.1.2", "u.u^-1", &[]),
        "t.u^-1, u.t, v.v^-1, v.t^-1, t^-1.v, u.u^-1",
        EMPTY,
        Expect::Check,
    ),
    row(
        "3.1.1.2.2",
        split("3.1.1.2", "u.u^-1", &[("u", "s^-1 u s")]),
        "t.s, v.t^-1, v.v^-1, t^-1.v, u.s^-1, u^-1.s^-1, u.u^-1",
        EMPTY,
        Expect::Check,
    ),
];

/// Check of one row, or of a generated subcase with no row.
#[derive(Clone, Debug)]
pub struct RowReport {
    pub id: String,
    pub classification: Classification,
    pub missing: RestrictionSet,
    pub restrictions: RestrictionSet,
    /// Whether the computed `N` equals the printed one; `None` for unlisted subcases.
    pub restrictions_match: Option<bool>,
    pub missing_match: Option<bool>,
    pub comment_check: String,
    /// `None` for unlisted subcases.
    pub pass: Option<bool>,
}

impl RowReport {
    pub fn result(&self) -> &'static str {
        match self.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "UNLISTED",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct TableReport {
    pub rows: Vec<RowReport>,
}

impl TableReport {
    pub fn listed(&self) -> impl Iterator<Item = &RowReport> {
        self.rows.iter().filter(|r| r.pass.is_some())
    }

    pub fn unlisted(&self) -> impl Iterator<Item = &RowReport> {
        self.rows.iter().filter(|r| r.pass.is_none())
    }

    pub fn failures(&self) -> impl Iterator<Item = &RowReport> {
        self.rows.iter().filter(|r| r.pass == Some(false))
    }

    pub fn all_listed_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn get(&self, id: &str) -> Option<&RowReport> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("id\tclassification\tmissing\tcomment_check\tresult\trestrictions\n");
        for r in &self.rows {
            let n = match r.restrictions_match {
                Some(true) => "as printed",
                Some(false) => "differs from printed",
                None => "-",
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.id,
                r.classification,
                format_missing(&r.missing),
                r.comment_check,
                r.result(),
                n
            );
        }
        out
    }
}

/// All listed problems, plus the generated subcases without a row.
#[derive(Clone, Debug, Default)]
pub struct CaseTree {
    pub states: BTreeMap<String, CaseState>,
    pub unlisted: Vec<SplitCase>,
}

fn same_substitution(child: &SplitCase, parent: &CaseState, moved: &[(&str, &str)]) -> bool {
    renaming(&parent.obj.alphabet, child.substitution.target(), moved)
        .is_ok_and(|h| h == child.substitution)
}

/// Builds every problem named in [`TABLE`].
pub fn build_tree() -> Result<CaseTree, CaseError> {
    let mut states: BTreeMap<String, CaseState> = BTreeMap::new();
    for c in initial_split() {
        states.insert(c.state.id.clone(), c.state);
    }
    let (x, x_prime) = auxiliary_cases();
    states.insert(x.id.clone(), x);
    states.insert(x_prime.id.clone(), x_prime);

    let mut splits: BTreeMap<(String, String), (Vec<SplitCase>, Vec<bool>)> = BTreeMap::new();
    for row in TABLE {
        match row.origin {
            Origin::Initial | Origin::Auxiliary => {}
            Origin::Derived { parent, extra } => {
                let p = states.get(parent).ok_or_else(|| CaseError::UnknownCase(parent.into()))?;
                let derived = p.restricted(row.id, &parse_set(extra));
                states.insert(row.id.into(), derived);
            }
            Origin::Split { parent, edge, substitution } => {
                let p = states.get(parent).ok_or_else(|| CaseError::UnknownCase(parent.into()))?.clone();
                let key = (parent.to_string(), edge.to_string());
                if !splits.contains_key(&key) {
                    let e: WhiteheadEdge = edge.parse()?;
                    let children = split_on_edge(&p, &e)?;
                    let used = vec![false; children.len()];
                    splits.insert(key.clone(), (children, used));
                }
                let (children, used) = splits.get_mut(&key).expect("inserted above");
                let found = children.iter().position(|c| same_substitution(c, &p, substitution));
                match found {
                    Some(i) => {
                        used[i] = true;
                        let mut state = children[i].state.clone();
                        state.id = row.id.into();
                        states.insert(row.id.into(), state);
                    }
                    None => {
                        log::warn!("row {}: no subcase of {parent} on {edge} has that substitution", row.id);
                    }
                }
            }
        }
    }
    let mut unlisted = Vec::new();
    for (_, (children, used)) in splits {
        for (c, u) in children.into_iter().zip(used) {
            if !u {
                let mut c = c;
                if states.contains_key(&c.state.id) {
                    c.state.id.push('*');
                }
                unlisted.push(c);
            }
        }
    }
    Ok(CaseTree { states, unlisted })
}

fn via_text(moved: &[(&str, &str)]) -> String {
    moved.iter().map(|(g, w)| format!("{g}->{w}")).collect::<Vec<_>>().join(", ")
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "confirmed"
    } else {
        "refuted"
    }
}

fn check_row(row: &TableRow, tree: &CaseTree) -> RowReport {
    let Some(state) = tree.states.get(row.id) else {
        return RowReport {
            id: row.id.into(),
            classification: Classification::Ambiguous(RestrictionSet::new()),
            missing: RestrictionSet::new(),
            restrictions: RestrictionSet::new(),
            restrictions_match: None,
            missing_match: None,
            comment_check: "no generated subcase matches the substitution".into(),
            pass: Some(false),
        };
    };
    let classification = classify(state);
    let missing = state.missing();
    let restrictions_match = Some(parse_set(row.printed_n) == state.obj.restrictions);
    let missing_match = row.printed_missing.map(|m| parse_set(m) == missing);
    let (comment_ok, mut comment_check) = match row.expect {
        Expect::Nothing => (true, "-".to_string()),
        Expect::Note(text) => (true, format!("note: {text}")),
        Expect::Check => {
            let ok = classification == Classification::PositiveStencil;
            (ok, format!("✓ {}", if ok { "confirmed" } else { "refuted" }))
        }
        Expect::Ambiguous => {
            let ok = matches!(classification, Classification::Ambiguous(_));
            (ok, format!("ambiguous {}", if ok { "confirmed" } else { "refuted" }))
        }
        Expect::Contained { target, via, amended } => {
            let reduces = |moved: &[(&str, &str)]| {
                tree.states.get(target).is_some_and(|t| {
                    renaming(&t.obj.alphabet, &state.obj.alphabet, moved).is_ok_and(|rho| reduce_to(state, t, &rho))
                })
            };
            let ok = reduces(via);
            let mut text = format!("contained in {target} via {}: {}", via_text(via), verdict(ok));
            if let (false, Some(alt)) = (ok, amended) {
                let _ = write!(text, "; via {}: {}", via_text(alt), verdict(reduces(alt)));
            }
            (ok, text)
        }
        Expect::Equivalent(target) => {
            let ok = tree.states.get(target).is_some_and(|t| {
                let there = GroupHom::identity(&t.obj.alphabet);
                let back = GroupHom::identity(&state.obj.alphabet);
                t.obj.alphabet.same_set(&state.obj.alphabet)
                    && reduce_to(state, t, &there)
                    && reduce_to(t, state, &back)
            });
            (ok, format!("equivalent to {target}: {}", if ok { "confirmed" } else { "refuted" }))
        }
    };
    if missing_match == Some(false) {
        let _ = write!(comment_check, "; printed W\\N {}", row.printed_missing.unwrap_or("∅"));
    }
    RowReport {
        id: row.id.into(),
        classification,
        missing,
        restrictions: state.obj.restrictions.clone(),
        restrictions_match,
        missing_match,
        comment_check,
        pass: Some(comment_ok && missing_match != Some(false)),
    }
}

/// Rebuilds every row, checks its printed missing set and comment, and appends the
/// generated subcases that have no row.
pub fn verify_tables(exec: Execution) -> Result<TableReport, CaseError> {
    let tree = build_tree()?;
    let mut rows = map_items(exec, TABLE, |row| check_row(row, &tree));
    for c in &tree.unlisted {
        let classification = classify(&c.state);
        rows.push(RowReport {
            id: c.state.id.clone(),
            missing: classification.missing(),
            classification,
            restrictions: c.state.obj.restrictions.clone(),
            restrictions_match: None,
            missing_match: None,
            comment_check: format!("subcase {} of {} on {}: {}", c.index(), c.parent, c.selector, c.substitution),
            pass: None,
        });
    }
    Ok(TableReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_is_built() {
        let tree = build_tree().unwrap();
        for row in TABLE {
            assert!(tree.states.contains_key(row.id), "row {}", row.id);
        }
    }

    #[test]
    fn row_ids_are_unique() {
        let mut ids: Vec<&str> = TABLE.iter().map(|r| r.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), TABLE.len());
    }
}
