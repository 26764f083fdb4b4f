#pragma once

#include "scfto/config.hpp"
#include "scfto/fuzzy.hpp"
#include "scfto/metrics.hpp"
#include "scfto/network.hpp"
#include "scfto/node.hpp"
#include "scfto/outlier.hpp"
#include "scfto/phy.hpp"
#include "scfto/protocol.hpp"
#include "scfto/protocol_params.hpp"
#include "scfto/rng.hpp"
#include "scfto/scenario.hpp"
#include "scfto/trust.hpp"
#include "scfto/version.hpp"
