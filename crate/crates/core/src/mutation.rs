//! Deliberate sign corruptions for checking that the verification suites
//! detect errors. Inactive unless a closure runs under [`with_mutation`].

use std::cell::Cell;

/// A sign flip that can be injected into one formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Drop the `(−1)^{qr}` factor in cochain composition.
    ComposeSign,
    /// Negate the Čech-style differential `δ`.
    DeltaSign,
    /// Drop the `(−1)^{m−1}` prefactor of the level-one component.
    Phi1Sign,
}

thread_local! {
    static ACTIVE: Cell<Option<Mutation>> = const { Cell::new(None) };
}

/// Runs `f` with `m` injected on the current thread.
pub fn with_mutation<T>(m: Mutation, f: impl FnOnce() -> T) -> T {
    struct Reset(Option<Mutation>);
    impl Drop for Reset {
        fn drop(&mut self) {
            ACTIVE.with(|a| a.set(self.0));
        }
    }
    let previous = ACTIVE.with(|a| a.replace(Some(m)));
    let _reset = Reset(previous);
    f()
}

#[inline]
pub(crate) fn active(m: Mutation) -> bool {
    ACTIVE.with(|a| a.get() == Some(m))
}
