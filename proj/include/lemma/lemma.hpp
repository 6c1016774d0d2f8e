#ifndef LEMMA_LEMMA_HPP
#define LEMMA_LEMMA_HPP

#include "lemma/cfg.hpp"
#include "lemma/control_rule.hpp"
#include "lemma/dot.hpp"
#include "lemma/engine.hpp"
#include "lemma/program.hpp"
#include "lemma/sld.hpp"
#include "lemma/syntax.hpp"
#include "lemma/term.hpp"

#endif  // LEMMA_LEMMA_HPP
