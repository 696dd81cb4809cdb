/// Outcome of a mathematical check: either the property holds, or a
/// certificate witnessing its failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<C> {
    Holds,
    Fails(C),
}

impl<C> Verdict<C> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn certificate(&self) -> Option<&C> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(c) => Some(c),
        }
    }

    pub fn map<D>(self, f: impl FnOnce(C) -> D) -> Verdict<D> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(c) => Verdict::Fails(f(c)),
        }
    }
}
