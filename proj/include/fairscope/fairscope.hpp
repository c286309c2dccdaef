#pragma once

#include "fairscope/alternation/alternate.hpp"
#include "fairscope/audit/config.hpp"
#include "fairscope/audit/report.hpp"
#include "fairscope/audit/run.hpp"
#include "fairscope/divergence/gaussian.hpp"
#include "fairscope/ensemble/stack.hpp"
#include "fairscope/error.hpp"
#include "fairscope/ingest/csv.hpp"
#include "fairscope/ingest/fetch.hpp"
#include "fairscope/ingest/folds.hpp"
#include "fairscope/ingest/frame.hpp"
#include "fairscope/ingest/preprocess.hpp"
#include "fairscope/ingest/schema.hpp"
#include "fairscope/learners/config.hpp"
#include "fairscope/learners/fit.hpp"
#include "fairscope/learners/linear.hpp"
#include "fairscope/learners/model.hpp"
#include "fairscope/learners/tree.hpp"
#include "fairscope/learners/tree_models.hpp"
#include "fairscope/learners/tune.hpp"
#include "fairscope/synth/generate.hpp"
