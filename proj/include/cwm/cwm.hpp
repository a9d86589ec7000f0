#pragma once

#include "cwm/caseproof.hpp"
#include "cwm/duality.hpp"
#include "cwm/encoders.hpp"
#include "cwm/instances.hpp"
#include "cwm/io.hpp"
#include "cwm/model.hpp"
#include "cwm/oracle.hpp"
#include "cwm/solver.hpp"
#include "cwm/sparse.hpp"
#include "cwm/univariate.hpp"
