//! Query-to-model assignments.
//!
//! An [`Assignment`] is a total map from query index to model index: every
//! query is routed to exactly one model. Totality is enforced at
//! construction, so downstream evaluation never has to handle holes.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    model_of: Vec<usize>,
    num_models: usize,
}

impl Assignment {
    /// `model_of[i]` is the model index serving query `i`. Rejects indices
    /// outside `0..num_models` and an all-empty map.
    pub fn new(model_of: Vec<usize>, num_models: usize) -> Result<Self> {
        if num_models == 0 {
            return Err(Error::invalid("assignment over zero models"));
        }
        if model_of.is_empty() {
            return Err(Error::invalid("assignment over zero queries"));
        }
        if let Some((query, &model)) = model_of
            .iter()
            .enumerate()
            .find(|(_, &model)| model >= num_models)
        {
            return Err(Error::invalid(format!(
                "query {query} assigned to model index {model}, fleet has {num_models}"
            )));
        }
        Ok(Assignment {
            model_of,
            num_models,
        })
    }

    pub fn num_queries(&self) -> usize {
        self.model_of.len()
    }

    pub fn num_models(&self) -> usize {
        self.num_models
    }

    /// Model index serving query `query`.
    pub fn model_of(&self, query: usize) -> usize {
        self.model_of[query]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.model_of
    }

    /// Queries routed to each model, indexed by model.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_models];
        for &model in &self.model_of {
            counts[model] += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_tally_by_model() {
        let assignment = Assignment::new(vec![0, 2, 2, 1, 2], 3).unwrap();
        assert_eq!(assignment.counts(), vec![1, 1, 3]);
        assert_eq!(assignment.model_of(3), 1);
        assert_eq!(assignment.num_queries(), 5);
    }

    #[test]
    fn out_of_range_model_rejected() {
        let err = Assignment::new(vec![0, 3], 3).unwrap_err();
        assert!(err.to_string().contains("query 1"), "{err}");
    }

    #[test]
    fn empty_assignment_rejected() {
        assert!(Assignment::new(vec![], 2).is_err());
        assert!(Assignment::new(vec![0], 0).is_err());
    }
}
