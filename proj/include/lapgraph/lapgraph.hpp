#pragma once

#include "lapgraph/error.hpp"
#include "lapgraph/matrix_core.hpp"
#include "lapgraph/admm.hpp"
#include "lapgraph/graph.hpp"
#include "lapgraph/lsp.hpp"
#include "lapgraph/synth.hpp"
#include "lapgraph/metrics.hpp"
#include "lapgraph/parallel.hpp"
#include "lapgraph/model_select.hpp"
#include "lapgraph/bench.hpp"
#include "lapgraph/io.hpp"
