use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr;
use crate::scalar::BaseChart;

/// A named generator with its bidegree; odd generators have total degree
/// one, even ones total degree two.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub bidegree: (u32, u32),
}

impl Generator {
    pub fn new(name: impl Into<String>, bidegree: (u32, u32)) -> Self {
        Generator {
            name: name.into(),
            bidegree,
        }
    }

    pub fn degree(&self) -> u32 {
        self.bidegree.0 + self.bidegree.1
    }
}

/// Where a name lives in a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Base(usize),
    Odd(usize),
    Even(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorTable {
    chart: BaseChart,
    odd: Vec<Generator>,
    even: Vec<Generator>,
}

pub const MAX_ODD: usize = 64;

impl GeneratorTable {
    pub fn new(chart: BaseChart, odd: Vec<Generator>, even: Vec<Generator>) -> Result<Arc<Self>> {
        if odd.len() > MAX_ODD {
            return Err(Error::InvalidTable(format!(
                "at most {MAX_ODD} odd generators are supported"
            )));
        }
        let mut seen: std::collections::HashSet<&str> =
            chart.names().iter().map(String::as_str).collect();
        for g in odd.iter().chain(even.iter()) {
            if !expr::is_identifier(&g.name) {
                return Err(Error::InvalidTable(format!("`{}` is not an identifier", g.name)));
            }
            if !seen.insert(&g.name) {
                return Err(Error::InvalidTable(format!("duplicate name `{}`", g.name)));
            }
        }
        if let Some(g) = odd.iter().find(|g| g.degree() != 1) {
            return Err(Error::InvalidTable(format!("odd generator `{}` must have degree 1", g.name)));
        }
        if let Some(g) = even.iter().find(|g| g.degree() != 2) {
            return Err(Error::InvalidTable(format!("even generator `{}` must have degree 2", g.name)));
        }
        Ok(Arc::new(GeneratorTable { chart, odd, even }))
    }

    /// Table with odd generators only, all of bidegree (0, 1).
    pub fn odd_only<S: AsRef<str>>(chart: BaseChart, names: &[S]) -> Result<Arc<Self>> {
        let odd = names.iter().map(|n| Generator::new(n.as_ref(), (0, 1))).collect();
        Self::new(chart, odd, Vec::new())
    }

    pub fn chart(&self) -> &BaseChart {
        &self.chart
    }

    pub fn odd(&self) -> &[Generator] {
        &self.odd
    }

    pub fn even(&self) -> &[Generator] {
        &self.even
    }

    pub fn n_base(&self) -> usize {
        self.chart.dim()
    }

    pub fn n_odd(&self) -> usize {
        self.odd.len()
    }

    pub fn n_even(&self) -> usize {
        self.even.len()
    }

    pub fn lookup(&self, name: &str) -> Option<Slot> {
        if let Some(i) = self.chart.index_of(name) {
            return Some(Slot::Base(i));
        }
        if let Some(i) = self.odd.iter().position(|g| g.name == name) {
            return Some(Slot::Odd(i));
        }
        self.even.iter().position(|g| g.name == name).map(Slot::Even)
    }

    pub fn slot(&self, name: &str) -> Result<Slot> {
        self.lookup(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }
}

pub(crate) fn same_table(a: &Arc<GeneratorTable>, b: &Arc<GeneratorTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
