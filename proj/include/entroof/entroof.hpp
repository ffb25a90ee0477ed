#pragma once

#include "entroof/convex_set.hpp"
#include "entroof/errors.hpp"
#include "entroof/generalized_roof.hpp"
#include "entroof/geometric.hpp"
#include "entroof/linalg.hpp"
#include "entroof/matrix.hpp"
#include "entroof/measures.hpp"
#include "entroof/qstate.hpp"
#include "entroof/random.hpp"
#include "entroof/report.hpp"
#include "entroof/roofsolver.hpp"
#include "entroof/state_io.hpp"
#include "entroof/tensor.hpp"
#include "entroof/verify.hpp"
