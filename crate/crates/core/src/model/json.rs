use std::collections::BTreeMap;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::Model;
use crate::algebra::{Form, MultiIndex, Rational, MAX_GENERATORS};
use crate::error::{Error, ParseError, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDocument {
    name: String,
    generators: Vec<String>,
    #[serde(default)]
    d: BTreeMap<String, Vec<Term>>,
    omega: Vec<Term>,
}

/// `[coefficient, [generator, generator]]`
#[derive(Debug, Serialize, Deserialize)]
struct Term(String, Vec<String>);

fn parse_coefficient(text: &str) -> Result<Rational, ParseError> {
    let bad = || ParseError::BadCoefficient(text.to_string());
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed != text {
        return Err(bad());
    }
    if let Some((num, den)) = trimmed.split_once('/') {
        let num = num_bigint::BigInt::from_str(num).map_err(|_| bad())?;
        let den = num_bigint::BigInt::from_str(den).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational::new(num, den))
    } else {
        let n = num_bigint::BigInt::from_str(trimmed).map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
    }
}

fn parse_two_form(
    terms: &[Term],
    index: &BTreeMap<&str, usize>,
    m: usize,
) -> Result<Form, ParseError> {
    let mut form = Form::zero(m, 2);
    for Term(coefficient, pair) in terms {
        let c = parse_coefficient(coefficient)?;
        let [a, b] = pair.as_slice() else {
            return Err(ParseError::MalformedTerm(format!(
                "a 2-form term needs exactly two generators, got {}",
                pair.len()
            )));
        };
        if a == b {
            return Err(ParseError::MalformedTerm(format!(
                "generator pair repeats `{a}`"
            )));
        }
        let lookup = |g: &String| {
            index
                .get(g.as_str())
                .copied()
                .ok_or_else(|| ParseError::UnknownGenerator(g.clone()))
        };
        let (i, j) = (lookup(a)?, lookup(b)?);
        form = &form + &Form::from_indices(m, &[i, j], c);
    }
    Ok(form)
}

/// Parses and validates a model document (UTF-8 JSON).
pub fn parse_model(text: &[u8]) -> Result<Model> {
    let doc: ModelDocument = serde_json::from_slice(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let m = doc.generators.len();
    if !m.is_multiple_of(2) || m == 0 {
        return Err(ParseError::OddDimension(m).into());
    }
    if m > MAX_GENERATORS {
        return Err(ParseError::TooManyGenerators(m).into());
    }
    let mut index = BTreeMap::new();
    for (i, g) in doc.generators.iter().enumerate() {
        if index.insert(g.as_str(), i + 1).is_some() {
            return Err(ParseError::DuplicateGenerator(g.clone()).into());
        }
    }
    let mut d_gen = vec![Form::zero(m, 2); m];
    for (g, terms) in &doc.d {
        let i = *index
            .get(g.as_str())
            .ok_or_else(|| ParseError::UnknownGenerator(g.clone()))?;
        d_gen[i - 1] = parse_two_form(terms, &index, m)?;
    }
    let omega = parse_two_form(&doc.omega, &index, m)?;
    Model::new(doc.name, doc.generators, d_gen, omega).map_err(|e| match e {
        Error::InvalidModel(msg) => ParseError::Validation(msg).into(),
        other => other,
    })
}

fn two_form_terms(model: &Model, form: &Form) -> Vec<Term> {
    form.terms()
        .map(|(mi, c): (&MultiIndex, &Rational)| {
            let pair = mi
                .indices()
                .map(|i| model.generator_names()[i - 1].clone())
                .collect();
            Term(c.to_string(), pair)
        })
        .collect()
}

/// Serializes a model in the document format read by [`parse_model`].
pub fn to_json(model: &Model) -> String {
    let doc = ModelDocument {
        name: model.name().to_string(),
        generators: model.generator_names().to_vec(),
        d: (1..=model.dim())
            .filter(|&i| !model.d_generator(i).is_zero())
            .map(|i| {
                (
                    model.generator_names()[i - 1].clone(),
                    two_form_terms(model, model.d_generator(i)),
                )
            })
            .collect(),
        omega: two_form_terms(model, model.omega()),
    };
    serde_json::to_string_pretty(&doc).expect("model documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin, BUILTIN_NAMES};

    const KT4: &str = r#"{
      "name": "kt4",
      "generators": ["e1","e2","e3","e4"],
      "d": { "e4": [ ["1", ["e1","e2"]] ] },
      "omega": [ ["1", ["e1","e4"]], ["1", ["e2","e3"]] ]
    }"#;

    #[test]
    fn parses_kt4_document() {
        assert_eq!(
            parse_model(KT4.as_bytes()).unwrap(),
            builtin("kt4").unwrap()
        );
    }

    #[test]
    fn builtins_round_trip() {
        for name in BUILTIN_NAMES {
            let model = builtin(name).unwrap();
            assert_eq!(parse_model(to_json(&model).as_bytes()).unwrap(), model);
        }
    }

    #[test]
    fn rational_coefficients_and_reversed_pairs() {
        let doc = r#"{"name":"x","generators":["a","b"],"omega":[["-3/2",["b","a"]]]}"#;
        let model = parse_model(doc.as_bytes()).unwrap();
        assert_eq!(
            model.omega(),
            &Form::from_indices(2, &[1, 2], crate::algebra::ratio(3, 2))
        );
    }

    fn err(doc: &str) -> ParseError {
        match parse_model(doc.as_bytes()) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn distinct_errors() {
        assert!(matches!(err("{\"name\": "), ParseError::Syntax { .. }));
        assert!(matches!(
            err(r#"{"name":"x","generators":["a","b","c"],"omega":[]}"#),
            ParseError::OddDimension(3)
        ));
        assert!(matches!(
            err(r#"{"name":"x","generators":["a","b"],"omega":[["1",["a","z"]]]}"#),
            ParseError::UnknownGenerator(g) if g == "z"
        ));
        assert!(matches!(
            err(r#"{"name":"x","generators":["a","b"],"omega":[]}"#),
            ParseError::Validation(_)
        ));
        assert!(matches!(
            err(r#"{"name":"x","generators":["a","b"],"omega":[],"extra":1}"#),
            ParseError::Syntax { .. }
        ));
        assert!(matches!(
            err(r#"{"name":"x","generators":["a","b"],"omega":[["1/0",["a","b"]]]}"#),
            ParseError::BadCoefficient(_)
        ));
        assert!(matches!(
            err(r#"{"name":"x","generators":["a","b"],"omega":[["1",["a","a"]]]}"#),
            ParseError::MalformedTerm(_)
        ));
        assert!(matches!(
            err(r#"{"name":"x","generators":["a","a"],"omega":[]}"#),
            ParseError::DuplicateGenerator(_)
        ));
    }
}
