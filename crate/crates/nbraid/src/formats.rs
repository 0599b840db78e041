//! JSON documents for presentations, combed forms and p-quotients.

use std::collections::BTreeMap;

use nbraid_core::combing::CombedForm;
use nbraid_core::pquotient::PQuotient;
use nbraid_core::{parse_word, Error, Generator, GroupSpec, Presentation, Result, Word};
use serde::{Deserialize, Serialize};

/// `{spec, generators, relators}` with words in the text grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub spec: String,
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

impl PresentationDoc {
    pub fn new(p: &Presentation) -> PresentationDoc {
        PresentationDoc {
            spec: p.spec.map_or_else(|| p.name.clone(), |s| s.to_string()),
            generators: p.generators.iter().map(Generator::to_string).collect(),
            relators: p.relators.iter().map(|r| r.word.to_string()).collect(),
        }
    }

    /// Rebuilds the presentation. A recognised group spec must agree with
    /// the listed generators and relators; anything else is read as a
    /// presentation on `g[1], ..., g[r]`.
    pub fn to_presentation(&self) -> Result<Presentation> {
        let relators = self.relators.iter().map(|r| parse_word(r)).collect::<Result<Vec<Word>>>()?;
        if let Ok(spec) = self.spec.parse::<GroupSpec>() {
            let p = Presentation::of(spec)?;
            if PresentationDoc::new(&p) != *self {
                return Err(Error::PreconditionFailed(format!("document does not match the standard presentation of {}", spec)));
            }
            return Ok(p);
        }
        for (i, g) in self.generators.iter().enumerate() {
            if *g != Generator::Abstract(i as u16 + 1).to_string() {
                return Err(Error::PreconditionFailed(format!("custom generators must be g[1], g[2], ...; found {}", g)));
            }
        }
        let p = Presentation::custom(&self.spec, self.generators.len() as u16, relators);
        for r in &p.relators {
            p.check_word(&r.word)?;
        }
        Ok(p)
    }
}

/// `{levels}`, innermost strand first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombDoc {
    pub group: String,
    pub levels: Vec<String>,
}

impl CombDoc {
    pub fn new(spec: GroupSpec, form: &CombedForm) -> CombDoc {
        CombDoc { group: spec.to_string(), levels: form.levels.iter().map(Word::to_string).collect() }
    }
}

/// Orders per class as decimal strings, ranks of the layers, and the images
/// of the generators in the top quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqDoc {
    pub group: String,
    pub p: u32,
    pub orders: Vec<String>,
    pub ranks: Vec<usize>,
    pub images: BTreeMap<String, String>,
}

impl PqDoc {
    /// `series` holds the quotients of classes `1, 2, ...` in order.
    pub fn new(group: &str, series: &[PQuotient]) -> PqDoc {
        let top = series.last();
        let images = top
            .map(|q| {
                q.source()
                    .generators
                    .iter()
                    .enumerate()
                    .map(|(i, g)| (g.to_string(), q.format(q.generator_image(i))))
                    .collect()
            })
            .unwrap_or_default();
        PqDoc {
            group: group.to_string(),
            p: top.map_or(0, PQuotient::p),
            orders: series.iter().map(PQuotient::order_decimal).collect(),
            ranks: top.map(|q| (1..=q.class()).map(|k| q.rank(k)).collect()).unwrap_or_default(),
            images,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nbraid_core::pquotient::{series, DEFAULT_ORDER_LIMIT};

    #[test]
    fn presentation_round_trip() {
        for spec in ["closed:g=2,n=2", "bordered:g=2,b=2,n=3", "surface:g=3", "free:rank=2"] {
            let p = Presentation::of(spec.parse().unwrap()).unwrap();
            let doc = PresentationDoc::new(&p);
            let json = serde_json::to_string(&doc).unwrap();
            let back: PresentationDoc = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_presentation().unwrap(), p);
        }
        let k = Presentation::klein_bottle();
        assert_eq!(PresentationDoc::new(&k).to_presentation().unwrap(), k);
    }

    #[test]
    fn tampered_document_is_rejected() {
        let mut doc = PresentationDoc::new(&Presentation::of("surface:g=2".parse().unwrap()).unwrap());
        doc.relators[0] = "p[1]^2".into();
        assert!(doc.to_presentation().is_err());
    }

    #[test]
    fn pq_orders_are_decimal() {
        let p = Presentation::of("surface:g=2".parse().unwrap()).unwrap();
        let doc = PqDoc::new("surface:g=2", &series(&p, 2, 3, DEFAULT_ORDER_LIMIT).unwrap());
        assert_eq!(doc.orders, ["4", "16", "64"]);
        assert_eq!(doc.ranks, [2, 2, 2]);
        assert_eq!(doc.images.len(), 2);
    }
}
