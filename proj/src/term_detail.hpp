#pragma once

// Rebuild helpers that reuse an operator's shared event set instead of
// copying it. Used by the operational semantics.

#include "tockcheck/term.hpp"

namespace tockcheck::term::detail {

using SharedSet = std::shared_ptr<const EventSet>;

TermPtr hide(TermPtr p, SharedSet hidden);
TermPtr exception(TermPtr p, SharedSet a, TermPtr q);
TermPtr parallel(TermPtr left, SharedSet sync, TermPtr right);
TermPtr deadline(SharedSet a, int budget);
TermPtr chaos(SharedSet a);
TermPtr prioritise(TermPtr p, SharedSet low);

}  // namespace tockcheck::term::detail
