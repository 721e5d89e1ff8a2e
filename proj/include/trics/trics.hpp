#pragma once

#include "trics/atom.hpp"
#include "trics/batch.hpp"
#include "trics/certificate.hpp"
#include "trics/checker.hpp"
#include "trics/conjecture.hpp"
#include "trics/corpus.hpp"
#include "trics/kb.hpp"
#include "trics/kb_validate.hpp"
#include "trics/oracle.hpp"
#include "trics/plan.hpp"
#include "trics/proof.hpp"
#include "trics/prover.hpp"
#include "trics/solver.hpp"
#include "trics/svg.hpp"
#include "trics/tptp.hpp"
