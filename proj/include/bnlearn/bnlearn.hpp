#ifndef BNLEARN_BNLEARN_HPP
#define BNLEARN_BNLEARN_HPP

#include "datagen.hpp"
#include "errors.hpp"
#include "estimation.hpp"
#include "evaluation.hpp"
#include "io.hpp"
#include "model.hpp"
#include "random.hpp"
#include "scoring.hpp"
#include "search.hpp"
#include "stats.hpp"

#endif  // BNLEARN_BNLEARN_HPP
