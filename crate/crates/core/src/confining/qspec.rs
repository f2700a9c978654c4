//! Finite descriptions of subsets `Q` of the base `A`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::LampConfig;
use crate::error::{Error, Result};
use crate::group::{subgroup_closure, Coeff, GroupDesc, SubgroupDesc};
use crate::metrics::Side;
use crate::poly::{format_poly, parse_coeff_list, parse_poly};

/// Closure operations applied to the generators of a [`QKind::Custom`] set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClosureFlags {
    /// Closed under `f -> t^j f`, `j >= 0`.
    #[serde(default)]
    pub shift_closed: bool,
    /// Closed under sums (hence a subgroup, coefficients having finite order).
    #[serde(default)]
    pub sum_closed: bool,
    /// Closed under adding elements with only non-negative positions.
    #[serde(default)]
    pub bplus_closed: bool,
}

impl ClosureFlags {
    pub fn all() -> Self {
        ClosureFlags {
            shift_closed: true,
            sum_closed: true,
            bplus_closed: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QKind {
    /// `Q_H` (side plus: negative positions in `H`) or `Q'_H` (positive
    /// positions in `H`).
    QH {
        subgroup: SubgroupDesc,
        side: Side,
    },
    /// Support in `[0, inf)`.
    BPlus,
    /// Support in `(-inf, 0]`.
    BMinus,
    FullBase,
    /// `{ sum_k t^{j_k} p_{i_k} + b : j_k >= 0, i_k >= 2, b in B+ }` with
    /// `p_i = t^-i * template`.
    SpanCounterexample {
        template: LampConfig,
    },
    /// Closure of finitely many configurations under the chosen operations.
    Custom {
        configs: Vec<LampConfig>,
        flags: ClosureFlags,
    },
    /// Image of the inner set under `t -> t^-1`.
    Mirror(Box<QKind>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSpec {
    pub kind: QKind,
    pub group: GroupDesc,
    /// Membership is only decided for configurations supported in
    /// `[-window, window]`; `None` means everywhere.
    pub window: Option<i64>,
}

/// `(0,1) + (1,0)t`, so that `p_i = (0,1)t^-i + (1,0)t^(-i+1)`.
pub fn default_template() -> LampConfig {
    LampConfig::from_entries([(0, Coeff(vec![0, 1])), (1, Coeff(vec![1, 0]))])
}

impl QKind {
    fn mirror(&self) -> QKind {
        match self {
            QKind::QH { subgroup, side } => QKind::QH {
                subgroup: subgroup.clone(),
                side: match side {
                    Side::Plus => Side::Minus,
                    Side::Minus => Side::Plus,
                },
            },
            QKind::BPlus => QKind::BMinus,
            QKind::BMinus => QKind::BPlus,
            QKind::FullBase => QKind::FullBase,
            QKind::Mirror(inner) => (**inner).clone(),
            other => QKind::Mirror(Box::new(other.clone())),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            QKind::QH { .. } => "qh",
            QKind::BPlus => "bplus",
            QKind::BMinus => "bminus",
            QKind::FullBase => "fullbase",
            QKind::SpanCounterexample { .. } => "counterexample",
            QKind::Custom { .. } => "custom",
            QKind::Mirror(_) => "mirror",
        }
    }

    fn params(&self) -> Value {
        match self {
            QKind::QH { subgroup, side } => json!({
                "subgroup": subgroup.generators().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "side": side,
            }),
            QKind::SpanCounterexample { template } => json!({ "template": format_poly(template) }),
            QKind::Custom { configs, flags } => json!({
                "configs": configs.iter().map(format_poly).collect::<Vec<_>>(),
                "shift_closed": flags.shift_closed,
                "sum_closed": flags.sum_closed,
                "bplus_closed": flags.bplus_closed,
            }),
            QKind::Mirror(inner) => json!({
                "inner": { "kind": inner.name(), "params": inner.params() }
            }),
            _ => json!({}),
        }
    }

    fn from_json(kind: &str, params: &Value, g: &GroupDesc) -> Result<QKind> {
        let bad = |msg: String| Error::MalformedQSpec(msg);
        let str_field = |name: &str| -> Result<&str> {
            params
                .get(name)
                .and_then(Value::as_str)
                .ok_or_else(|| bad(format!("{kind}: missing string field {name:?}")))
        };
        Ok(match kind {
            "qh" => {
                let gens = params
                    .get("subgroup")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("qh: missing array field \"subgroup\"".into()))?;
                let mut coeffs = Vec::new();
                for v in gens {
                    let text = v
                        .as_str()
                        .ok_or_else(|| bad("qh: subgroup generators must be strings".into()))?;
                    coeffs.extend(parse_coeff_list(&format!("{{{text}}}"), g)?);
                }
                let side = match params.get("side").and_then(Value::as_str).unwrap_or("plus") {
                    "plus" => Side::Plus,
                    "minus" => Side::Minus,
                    other => {
                        return Err(bad(format!(
                            "qh: side must be plus or minus, got {other:?}"
                        )))
                    }
                };
                QKind::QH {
                    subgroup: subgroup_closure(&coeffs, g)?,
                    side,
                }
            }
            "bplus" => QKind::BPlus,
            "bminus" => QKind::BMinus,
            "fullbase" => QKind::FullBase,
            "counterexample" => {
                let template = match params.get("template") {
                    None => default_template(),
                    Some(_) => parse_poly(str_field("template")?, g)?,
                };
                if template.is_empty() {
                    return Err(bad("counterexample: template must be nonzero".into()));
                }
                QKind::SpanCounterexample { template }
            }
            "custom" => {
                let configs = params
                    .get("configs")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("custom: missing array field \"configs\"".into()))?
                    .iter()
                    .map(|v| {
                        v.as_str()
                            .ok_or_else(|| bad("custom: configs must be strings".into()))
                            .and_then(|s| parse_poly(s, g))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let flags: ClosureFlags = serde_json::from_value(params.clone())
                    .map_err(|e| bad(format!("custom: {e}")))?;
                QKind::Custom { configs, flags }
            }
            "mirror" => {
                let inner = params
                    .get("inner")
                    .ok_or_else(|| bad("mirror: missing field \"inner\"".into()))?;
                let k = inner
                    .get("kind")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("mirror: inner kind missing".into()))?;
                let p = inner.get("params").cloned().unwrap_or_else(|| json!({}));
                QKind::Mirror(Box::new(QKind::from_json(k, &p, g)?))
            }
            other => return Err(bad(format!("unknown kind {other:?}"))),
        })
    }
}

#[derive(Deserialize)]
struct RawSpec {
    kind: String,
    group: String,
    #[serde(default)]
    window: Option<i64>,
    #[serde(default)]
    params: Option<Value>,
}

impl QSpec {
    pub fn new(kind: QKind, group: GroupDesc) -> Self {
        QSpec {
            kind,
            group,
            window: None,
        }
    }

    pub fn with_window(mut self, window: i64) -> Self {
        self.window = Some(window);
        self
    }

    pub fn qh(subgroup: SubgroupDesc, side: Side, group: GroupDesc) -> Self {
        QSpec::new(QKind::QH { subgroup, side }, group)
    }

    /// The counterexample over `Z2 x Z2` with the default template.
    pub fn counterexample() -> Self {
        QSpec::new(
            QKind::SpanCounterexample {
                template: default_template(),
            },
            GroupDesc::new(vec![2, 2]).expect("Z2xZ2 is valid"),
        )
    }

    /// Over `Z8`, the closure of `4t^-i + 2t^(-i+1) + t^-1` for
    /// `2 <= i <= 2W + 2`, decided on `[-(2W+2), 2W+2]`.
    pub fn z8_example(window: i64) -> Self {
        let depth = 2 * window.max(1) + 2;
        let g = GroupDesc::cyclic(8).expect("Z8 is valid");
        // i = 2 puts the 2 and the 1 on the same position, so add termwise
        let configs = (2..=depth)
            .map(|i| {
                [(-i, 4), (-i + 1, 2), (-1, 1)]
                    .iter()
                    .fold(LampConfig::new(), |acc, &(p, v)| {
                        g.config_add_unchecked(&acc, &LampConfig::from_cyclic(&[(p, v)]))
                    })
            })
            .collect();
        QSpec::new(
            QKind::Custom {
                configs,
                flags: ClosureFlags::all(),
            },
            g,
        )
        .with_window(depth)
    }

    /// Named built-ins: `qh:Z4:{2}`, `qh-:Z4:{2}`, `bplus:Z4`, `bminus:Z4`,
    /// `fullbase:Z4`, `counterexample`, `z8example`.
    pub fn builtin(name: &str, window: i64) -> Result<Self> {
        let bad = || Error::MalformedQSpec(format!("unknown built-in {name:?}"));
        match name {
            "counterexample" => return Ok(QSpec::counterexample()),
            "z8example" => return Ok(QSpec::z8_example(window)),
            _ => {}
        }
        let mut parts = name.splitn(3, ':');
        let head = parts.next().ok_or_else(bad)?;
        let g = GroupDesc::parse(parts.next().ok_or_else(bad)?)?;
        let rest = parts.next();
        let kind = match (head, rest) {
            ("qh" | "qh+" | "qh-", Some(gens)) => QKind::QH {
                subgroup: subgroup_closure(&parse_coeff_list(gens, &g)?, &g)?,
                side: if head == "qh-" {
                    Side::Minus
                } else {
                    Side::Plus
                },
            },
            ("bplus", None) => QKind::BPlus,
            ("bminus", None) => QKind::BMinus,
            ("fullbase", None) => QKind::FullBase,
            _ => return Err(bad()),
        };
        Ok(QSpec::new(kind, g))
    }

    /// Image under `t -> t^-1`.
    pub fn mirror(&self) -> QSpec {
        QSpec {
            kind: self.kind.mirror(),
            group: self.group.clone(),
            window: self.window,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "group": self.group.to_string(),
            "window": self.window,
            "params": self.kind.params(),
        })
    }

    pub fn from_json(v: &Value) -> Result<QSpec> {
        let raw: RawSpec =
            serde_json::from_value(v.clone()).map_err(|e| Error::MalformedQSpec(e.to_string()))?;
        let group = GroupDesc::parse(&raw.group)?;
        let params = raw.params.unwrap_or_else(|| json!({}));
        if !params.is_object() {
            return Err(Error::MalformedQSpec("params must be an object".into()));
        }
        let kind = QKind::from_json(&raw.kind, &params, &group)?;
        if let Some(w) = raw.window {
            if w < 0 {
                return Err(Error::MalformedQSpec(format!("negative window {w}")));
            }
        }
        let spec = QSpec {
            kind,
            group,
            window: raw.window,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json_str(text: &str) -> Result<QSpec> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::MalformedQSpec(e.to_string()))?;
        QSpec::from_json(&v)
    }

    /// Coefficients belong to the group and custom generators fit the window.
    pub fn validate(&self) -> Result<()> {
        fn walk(kind: &QKind, q: &QSpec) -> Result<()> {
            match kind {
                QKind::QH { subgroup, .. } => subgroup
                    .elements()
                    .iter()
                    .try_for_each(|c| q.group.validate(c)),
                QKind::SpanCounterexample { template } => q.group.validate_config(template),
                QKind::Custom { configs, .. } => {
                    for f in configs {
                        q.group.validate_config(f)?;
                        if let Some(w) = q.window {
                            if !f.within(-w, w) {
                                return Err(Error::SupportExceedsWindow {
                                    config: format_poly(f),
                                    window: w,
                                });
                            }
                        }
                    }
                    Ok(())
                }
                QKind::Mirror(inner) => walk(inner, q),
                _ => Ok(()),
            }
        }
        walk(&self.kind, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse() {
        let q = QSpec::builtin("qh:Z12:{4}", 4).unwrap();
        match &q.kind {
            QKind::QH { subgroup, side } => {
                assert_eq!(subgroup.to_string(), "{0,4,8}");
                assert_eq!(*side, Side::Plus);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(QSpec::builtin("bplus:Z4", 4).unwrap().kind, QKind::BPlus);
        assert!(QSpec::builtin("nonsense", 4).is_err());
        assert!(QSpec::builtin("qh:Z4:{5}", 4).is_err());
    }

    #[test]
    fn mirror_is_an_involution() {
        for q in [
            QSpec::builtin("qh:Z4:{2}", 4).unwrap(),
            QSpec::builtin("bplus:Z3", 4).unwrap(),
            QSpec::counterexample(),
            QSpec::z8_example(3),
        ] {
            assert_eq!(q.mirror().mirror(), q);
        }
    }

    #[test]
    fn json_round_trip() {
        for q in [
            QSpec::builtin("qh-:Z12:{4}", 4).unwrap(),
            QSpec::builtin("fullbase:Z2xZ2", 4).unwrap(),
            QSpec::counterexample(),
            QSpec::counterexample().mirror(),
            QSpec::z8_example(2),
        ] {
            let text = q.to_json().to_string();
            assert_eq!(QSpec::from_json_str(&text).unwrap(), q, "{text}");
        }
    }

    #[test]
    fn malformed_json() {
        for text in [
            "{",
            r#"{"kind":"qh","group":"Z4"}"#,
            r#"{"kind":"wat","group":"Z4","params":{}}"#,
            r#"{"kind":"custom","group":"Z4","params":{"configs":[3]}}"#,
            r#"{"kind":"qh","group":"Z4","params":{"subgroup":["2"],"side":"up"}}"#,
        ] {
            assert!(
                matches!(QSpec::from_json_str(text), Err(Error::MalformedQSpec(_))),
                "{text}"
            );
        }
        let text = r#"{"kind":"custom","group":"Z4","window":2,"params":{"configs":["t^-5"]}}"#;
        assert!(matches!(
            QSpec::from_json_str(text),
            Err(Error::SupportExceedsWindow { .. })
        ));
    }
}
