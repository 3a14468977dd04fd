//! Flat JSON form of [`FactorSpec`].

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::factors::{BaseFamily, FactorSpec, ParityKind, Transform};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum TransformTag {
    Sin,
    Arcsin,
    Tan,
    Arctan,
    Log,
    Exp,
    Root,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Real")]
pub(crate) struct FactorRepr<T> {
    family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m_root: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transform: Option<TransformTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<BaseFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    head: Option<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<Box<FactorSpec<T>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    operands: Option<Vec<FactorSpec<T>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parity: Option<ParityKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    factor: Option<Box<FactorSpec<T>>>,
}

impl<T> FactorRepr<T> {
    fn tagged(family: &str) -> Self {
        FactorRepr {
            family: family.to_string(),
            r: None,
            alpha: None,
            a: None,
            m_root: None,
            transform: None,
            base: None,
            head: None,
            tail: None,
            operands: None,
            parity: None,
            scale: None,
            factor: None,
        }
    }
}

impl<T: Real> From<FactorSpec<T>> for FactorRepr<T> {
    fn from(spec: FactorSpec<T>) -> Self {
        let mut repr = FactorRepr::tagged(spec.family());
        match spec {
            FactorSpec::ConstantPower { alpha, r }
            | FactorSpec::SincPower { alpha, r }
            | FactorSpec::BumpSine { alpha, r }
            | FactorSpec::BumpPoly { alpha, r } => {
                repr.alpha = Some(alpha);
                repr.r = Some(r);
            }
            FactorSpec::Transformed {
                transform,
                base,
                alpha,
                r,
            } => {
                repr.alpha = Some(alpha);
                repr.r = Some(r);
                repr.base = Some(base);
                repr.transform = Some(match transform {
                    Transform::Sin => TransformTag::Sin,
                    Transform::Arcsin => TransformTag::Arcsin,
                    Transform::Tan => TransformTag::Tan,
                    Transform::Arctan => TransformTag::Arctan,
                    Transform::Log { a } => {
                        repr.a = Some(a);
                        TransformTag::Log
                    }
                    Transform::Exp { a } => {
                        repr.a = Some(a);
                        TransformTag::Exp
                    }
                    Transform::Root { m } => {
                        repr.m_root = Some(m);
                        TransformTag::Root
                    }
                });
            }
            FactorSpec::Composite { head, tail } => {
                repr.head = Some(head);
                repr.tail = Some(tail);
            }
            FactorSpec::Product(f1, f2) => repr.operands = Some(vec![*f1, *f2]),
            FactorSpec::Parity(kind) => repr.parity = Some(kind),
            FactorSpec::Scaled { scale, factor } => {
                repr.scale = Some(scale);
                repr.factor = Some(factor);
            }
        }
        repr
    }
}

impl<T: Real> TryFrom<FactorRepr<T>> for FactorSpec<T> {
    type Error = Error;

    fn try_from(repr: FactorRepr<T>) -> Result<Self, Error> {
        fn need<V>(v: Option<V>, family: &str, field: &str) -> Result<V, Error> {
            v.ok_or_else(|| Error::InvalidFactor(format!("{family} requires field \"{field}\"")))
        }
        let fam = repr.family.as_str();
        let spec = match fam {
            "ConstantPower" | "SincPower" | "BumpSine" | "BumpPoly" | "Transformed" => {
                let alpha = need(repr.alpha, fam, "alpha")?;
                let r = need(repr.r, fam, "r")?;
                match fam {
                    "ConstantPower" => FactorSpec::ConstantPower { alpha, r },
                    "SincPower" => FactorSpec::SincPower { alpha, r },
                    "BumpSine" => FactorSpec::BumpSine { alpha, r },
                    "BumpPoly" => FactorSpec::BumpPoly { alpha, r },
                    _ => {
                        let transform = match need(repr.transform, fam, "transform")? {
                            TransformTag::Sin => Transform::Sin,
                            TransformTag::Arcsin => Transform::Arcsin,
                            TransformTag::Tan => Transform::Tan,
                            TransformTag::Arctan => Transform::Arctan,
                            TransformTag::Log => Transform::Log {
                                a: need(repr.a, fam, "a")?,
                            },
                            TransformTag::Exp => Transform::Exp {
                                a: need(repr.a, fam, "a")?,
                            },
                            TransformTag::Root => Transform::Root {
                                m: need(repr.m_root, fam, "m_root")?,
                            },
                        };
                        FactorSpec::Transformed {
                            transform,
                            base: repr.base.unwrap_or(BaseFamily::ConstantPower),
                            alpha,
                            r,
                        }
                    }
                }
            }
            "Composite" => {
                let tail = need(repr.tail, fam, "tail")?;
                if let Some(r) = repr.r {
                    if tail.decay_order() != r + 1 {
                        return Err(Error::InvalidFactor(format!(
                            "composite tail decays with order {}, expected 1 + r = {}",
                            tail.decay_order(),
                            r + 1
                        )));
                    }
                }
                FactorSpec::Composite {
                    head: need(repr.head, fam, "head")?,
                    tail,
                }
            }
            "Product" => {
                let ops = need(repr.operands, fam, "operands")?;
                let [f1, f2]: [FactorSpec<T>; 2] = ops.try_into().map_err(|v: Vec<_>| {
                    Error::InvalidFactor(format!("Product takes 2 operands, got {}", v.len()))
                })?;
                FactorSpec::product(f1, f2)
            }
            "Parity" => FactorSpec::Parity(need(repr.parity, fam, "parity")?),
            "Scaled" => FactorSpec::Scaled {
                scale: need(repr.scale, fam, "scale")?,
                factor: need(repr.factor, fam, "factor")?,
            },
            other => return Err(Error::InvalidFactor(format!("unknown family \"{other}\""))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_object() {
        let f: FactorSpec<f64> = serde_json::from_str(
            r#"{"family":"Transformed","transform":"Log","a":2.5,"base":"SincPower","alpha":0.3,"r":2}"#,
        )
        .unwrap();
        assert_eq!(
            f,
            FactorSpec::transformed(Transform::Log { a: 2.5 }, BaseFamily::SincPower, 0.3, 2)
        );
    }

    #[test]
    fn rejects_bad_documents() {
        let bad = [
            r#"{"family":"ConstantPower","alpha":1.0}"#,
            r#"{"family":"ConstantPower","alpha":-1.0,"r":1}"#,
            r#"{"family":"Nope","alpha":1.0,"r":1}"#,
            r#"{"family":"Transformed","transform":"Root","alpha":1.0,"r":1}"#,
            r#"{"family":"Product","operands":[{"family":"Parity","parity":"Alternating"}]}"#,
            r#"{"family":"Composite","r":2,"head":[1.0],"tail":{"family":"ConstantPower","alpha":1.0,"r":1}}"#,
            r#"{"family":"ConstantPower","alpha":1.0,"r":1,"extra":3}"#,
        ];
        for doc in bad {
            assert!(serde_json::from_str::<FactorSpec<f64>>(doc).is_err(), "{doc}");
        }
    }

    #[test]
    fn nested_round_trip() {
        let f = FactorSpec::product(
            FactorSpec::composite(vec![0.1, 0.2], FactorSpec::sinc_power(0.25, 1)),
            FactorSpec::Parity(ParityKind::EvenOnly),
        )
        .scaled(7.0);
        let text = serde_json::to_string(&f).unwrap();
        let back: FactorSpec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
}
