use num_traits::One;

use super::Model;
use crate::algebra::{Form, Rational};
use crate::error::{Error, Result};

pub const BUILTIN_NAMES: [&str; 7] = ["t2", "t4", "t6", "kt4", "solv2", "solv4", "kt4xt2"];

fn names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("e{i}")).collect()
}

fn e(m: usize, ix: &[usize]) -> Form {
    Form::from_indices(m, ix, Rational::one())
}

/// Abelian model on `2n` generators with `Ω = Σ e^{2i-1} ∧ e^{2i}`.
pub fn torus(n: usize) -> Model {
    let m = 2 * n;
    let omega = (1..=n).fold(Form::zero(m, 2), |acc, i| &acc + &e(m, &[2 * i - 1, 2 * i]));
    Model::new(format!("t{m}"), names(m), vec![Form::zero(m, 2); m], omega)
        .expect("tori are symplectic")
}

/// Kodaira–Thurston: `d e^4 = e^{12}`, `Ω = e^{14} + e^{23}`.
pub fn kodaira_thurston() -> Model {
    let mut d_gen = vec![Form::zero(4, 2); 4];
    d_gen[3] = e(4, &[1, 2]);
    Model::new("kt4", names(4), d_gen, &e(4, &[1, 4]) + &e(4, &[2, 3]))
        .expect("Kodaira–Thurston model is symplectic")
}

/// The 2-dimensional non-abelian solvable algebra with exact `Ω = d e^2`.
pub fn solvable_plane() -> Model {
    Model::new(
        "solv2",
        names(2),
        vec![Form::zero(2, 2), e(2, &[1, 2])],
        e(2, &[1, 2]),
    )
    .expect("solv2 is symplectic")
}

pub fn builtin(name: &str) -> Result<Model> {
    let model = match name {
        "t2" => torus(1),
        "t4" => torus(2),
        "t6" => torus(3),
        "kt4" => kodaira_thurston(),
        "solv2" => solvable_plane(),
        "solv4" => solvable_plane()
            .product(&solvable_plane())?
            .with_name("solv4"),
        "kt4xt2" => kodaira_thurston().product(&torus(1))?.with_name("kt4xt2"),
        _ => {
            return Err(Error::UnknownModel {
                name: name.to_string(),
                available: BUILTIN_NAMES.join(", "),
            })
        }
    };
    Ok(model)
}
