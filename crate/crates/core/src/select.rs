//! Mirrored models and AIC comparison of the six Pseudo-Poisson cards.
//!
//! The mirrored model swaps the roles of the two counts: `X2 ~ Poisson` and
//! `X1 | X2` Poisson with a linear rate. It is fitted by running the same
//! estimators on the mirrored sample.

use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimation::{mle_fit, FitResult};
use crate::model::{Sample, SubmodelKind};

pub use crate::estimation::zero_intercept_feasible;

/// Marker printed for models that cannot be fitted to the data.
pub const INFEASIBLE_MARK: &str = "----";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CardName {
    #[serde(rename = "FM")]
    Fm,
    #[serde(rename = "MFM")]
    Mfm,
    #[serde(rename = "SM-I")]
    SmI,
    #[serde(rename = "MSM-I")]
    MsmI,
    #[serde(rename = "SM-II")]
    SmII,
    #[serde(rename = "MSM-II")]
    MsmII,
    /// Independent Poisson margins; reported for reference only.
    #[serde(rename = "IND")]
    Independence,
}

impl CardName {
    /// The six cards in table order.
    pub const TABLE: [CardName; 6] = [
        CardName::Fm,
        CardName::Mfm,
        CardName::SmI,
        CardName::MsmI,
        CardName::SmII,
        CardName::MsmII,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CardName::Fm => "FM",
            CardName::Mfm => "MFM",
            CardName::SmI => "SM-I",
            CardName::MsmI => "MSM-I",
            CardName::SmII => "SM-II",
            CardName::MsmII => "MSM-II",
            CardName::Independence => "IND",
        }
    }

    pub fn mirrored(self) -> bool {
        matches!(self, CardName::Mfm | CardName::MsmI | CardName::MsmII)
    }

    pub fn submodel(self) -> SubmodelKind {
        match self {
            CardName::Fm | CardName::Mfm => SubmodelKind::Full,
            CardName::SmI | CardName::MsmI => SubmodelKind::EqualRates,
            CardName::SmII | CardName::MsmII => SubmodelKind::ZeroIntercept,
            CardName::Independence => SubmodelKind::Independence,
        }
    }

    /// Same model with the other variable ordering.
    pub fn counterpart(self) -> CardName {
        match self {
            CardName::Fm => CardName::Mfm,
            CardName::Mfm => CardName::Fm,
            CardName::SmI => CardName::MsmI,
            CardName::MsmI => CardName::SmI,
            CardName::SmII => CardName::MsmII,
            CardName::MsmII => CardName::SmII,
            CardName::Independence => CardName::Independence,
        }
    }
}

impl fmt::Display for CardName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelCard {
    pub name: CardName,
    pub mirrored: bool,
    pub submodel: SubmodelKind,
    pub nparams: u32,
    pub fit: Option<FitResult>,
    pub aic: Option<f64>,
    pub feasible: bool,
    /// Why the card is infeasible.
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub cards: Vec<ModelCard>,
    pub independence: ModelCard,
    pub best: CardName,
}

impl ComparisonReport {
    pub fn card(&self, name: CardName) -> &ModelCard {
        if name == CardName::Independence {
            return &self.independence;
        }
        self.cards
            .iter()
            .find(|c| c.name == name)
            .expect("report holds all six cards")
    }

    /// Plain-text table: model, parameter count, `-2 log L`, AIC.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<14} {:>14} {:>14} {:>14}",
            "Models", "No. Parameters", "-2 log L", "AIC"
        );
        let rows = self.cards.iter().chain(std::iter::once(&self.independence));
        for card in rows {
            let label = match card.name {
                CardName::Independence => "BPP IND*".to_string(),
                name => format!("BPP {}", name.label()),
            };
            let (dev, aic) = match (&card.fit, card.aic) {
                (Some(fit), Some(aic)) => (format!("{:.3}", fit.deviance()), format!("{aic:.3}")),
                _ => (INFEASIBLE_MARK.to_string(), INFEASIBLE_MARK.to_string()),
            };
            let _ = writeln!(out, "{:<14} {:>14} {:>14} {:>14}", label, card.nparams, dev, aic);
        }
        let _ = writeln!(out, "Best (minimum AIC): BPP {}", self.best.label());
        let _ = writeln!(out, "* independence is shown for reference and not ranked");
        out
    }
}

/// `-2 * loglik + 2 * nparams`.
pub fn aic(loglik: f64, nparams: u32) -> Result<f64> {
    if !loglik.is_finite() {
        return Err(Error::Infeasible(format!(
            "AIC needs a finite log-likelihood, got {loglik}"
        )));
    }
    Ok(-2.0 * loglik + 2.0 * nparams as f64)
}

/// The sample with x1 and x2 interchanged in every pair.
pub fn mirror(sample: &Sample) -> Sample {
    sample.mirrored()
}

fn build_card(name: CardName, sample: &Sample) -> ModelCard {
    let submodel = name.submodel();
    let nparams = submodel.nparams();
    let outcome = mle_fit(sample, submodel).and_then(|fit| {
        let aic = aic(fit.loglik, nparams)?;
        Ok((fit, aic))
    });
    match outcome {
        Ok((fit, aic)) => ModelCard {
            name,
            mirrored: name.mirrored(),
            submodel,
            nparams,
            fit: Some(fit),
            aic: Some(aic),
            feasible: true,
            reason: None,
        },
        Err(e) => ModelCard {
            name,
            mirrored: name.mirrored(),
            submodel,
            nparams,
            fit: None,
            aic: None,
            feasible: false,
            reason: Some(e.to_string()),
        },
    }
}

/// Fit the six cards by maximum likelihood and rank the feasible ones by AIC.
/// Ties go to the card with fewer parameters, then to table order.
pub fn compare_models(sample: &Sample) -> Result<ComparisonReport> {
    let mirrored = sample.mirrored();
    let cards: Vec<ModelCard> = CardName::TABLE
        .par_iter()
        .map(|&name| {
            let data = if name.mirrored() { &mirrored } else { sample };
            build_card(name, data)
        })
        .collect();
    let independence = build_card(CardName::Independence, sample);

    let best = cards
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.aic.map(|a| (a, c.nparams, i)))
        .min_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(a.1.cmp(&b.1))
                .then(a.2.cmp(&b.2))
        })
        .map(|(_, _, i)| cards[i].name)
        .ok_or_else(|| {
            Error::Infeasible("none of the six Pseudo-Poisson models can be fitted".into())
        })?;

    Ok(ComparisonReport {
        cards,
        independence,
        best,
    })
}
