use descentlab::complexes::{ChainMap, Complex};
use descentlab::descent::{self, RandomShape};
use descentlab::linalg::SparseMatrix;
use descentlab::operad_alg::{p1_polyvector_presheaf, random_cdga_presheaf, triangle_locally_constant};
use descentlab::scalars::{NovikovElem, NovikovRing, Rational};
use serde_json::{json, Value};

use crate::{CliError, Options};

pub const NAMES: &[&str] = &[
    "triangle-boundary",
    "triangle-three-edges",
    "square",
    "disjoint",
    "constant",
    "random",
    "triangle-cdga",
    "random-cdga",
    "p1-polyvector",
    "novikov-telescope",
    "half-plane-cover",
    "bv-polynomial",
];

pub type Diagram<S> = (Vec<Complex<S>>, Vec<ChainMap<S>>);

/// The T-multiplication diagram `Λ → Λ → Λ` over the truncated Novikov ring.
pub fn novikov_telescope(den: u32, cutoff: &Rational) -> Result<Diagram<NovikovElem>, CliError> {
    let ring = NovikovRing::new(den, cutoff.clone()).map_err(|e| CliError::Range(e.to_string()))?;
    let c = Complex::<NovikovElem>::concentrated(ring.clone(), 0, 1);
    let t = NovikovElem::parse(&ring, "T").map_err(|e| CliError::Range(e.to_string()))?;
    let m = ChainMap::new(c.clone(), c.clone(), 0, [(0, SparseMatrix::from_triplets(1, 1, [(0, 0, t)]))].into()).map_err(CliError::math)?;
    Ok((vec![c.clone(); 3], vec![m.clone(), m]))
}

pub fn emit_fixture(name: &str, opts: &Options) -> Result<Value, CliError> {
    Ok(match name {
        "triangle-boundary" => {
            let (x, members) = descent::triangle_two_arcs();
            x.cover_presheaf(&members).map_err(CliError::math)?.to_json()
        }
        "triangle-three-edges" => {
            let (x, members) = descent::triangle_three_edges();
            x.cover_presheaf(&members).map_err(CliError::math)?.to_json()
        }
        "square" => {
            let (x, members) = descent::square_complex();
            x.cover_presheaf(&members).map_err(CliError::math)?.to_json()
        }
        "disjoint" => descent::disjoint().map_err(CliError::math)?.to_json(),
        "constant" => descent::constant(3).map_err(CliError::math)?.to_json(),
        "random" => {
            let shape = RandomShape { members: 1 + (opts.seed % 4) as usize, ..RandomShape::default() };
            descent::random_presheaf(opts.seed, shape).map_err(CliError::math)?.to_json()
        }
        "triangle-cdga" => triangle_locally_constant().map_err(CliError::math)?.to_json(),
        "random-cdga" => random_cdga_presheaf(opts.seed, 1 + (opts.seed % 3) as usize).map_err(CliError::math)?.to_json(),
        "p1-polyvector" => p1_polyvector_presheaf(opts.laurent_cutoff).map_err(CliError::math)?.cdga.to_json(),
        "novikov-telescope" => {
            let (dg, ms) = novikov_telescope(opts.novikov_den, &opts.novikov_e)?;
            json!({
                "diagram": dg.iter().map(Complex::to_json).collect::<Vec<_>>(),
                "maps": ms.iter().map(ChainMap::to_json).collect::<Vec<_>>(),
            })
        }
        "half-plane-cover" => json!({
            "dof": 2,
            "sets": [
                {"region": {"le": "q1"}, "functions": ["q1 - 1/8", "q1 - 1/16", "q1 - 1/24"]},
                {"region": {"le": "q2"}, "functions": ["q2 - 1/8", "q2 - 1/16", "q2 - 1/24"]},
            ],
            "combine": [
                {"intersection": [{"set": 0}, {"set": 1}, ["1/128", "1/512", "1/1152"]]},
                {"union": [{"set": 0}, {"set": 1}, ["1/128", "1/512", "1/1152"]]},
            ],
            "grid": {"axes": [["-2", "2", "1/4"], ["-2", "2", "1/4"], ["0", "0", "1"], ["0", "0", "1"]]},
        }),
        "bv-polynomial" => json!({"ring": "polynomial", "vars": 2, "max_degree": 3, "operator": "divergence"}),
        other => return Err(CliError::UnknownFixture(other.to_string())),
    })
}
