#pragma once

#include "sigca/errors.hpp"
#include "sigca/core_model.hpp"
#include "sigca/local_rule.hpp"
#include "sigca/configuration.hpp"
#include "sigca/validate.hpp"
#include "sigca/turing.hpp"
#include "sigca/predicate.hpp"
#include "sigca/predicate_library.hpp"
#include "sigca/checker.hpp"
#include "sigca/bitstream.hpp"
#include "sigca/compiler.hpp"
#include "sigca/recode.hpp"
#include "sigca/simulator.hpp"
#include "sigca/harness.hpp"
#include "sigca/json_io.hpp"
