#pragma once

// Everything except the HTTP layer, which needs cpp-httplib and threads:
// include "qboard/http_server.hpp" for that.

#include "errors.hpp"
#include "cell.hpp"
#include "gate.hpp"
#include "board.hpp"
#include "dense_state.hpp"
#include "superposition.hpp"
#include "move.hpp"
#include "move_kernel.hpp"
#include "fir_rules.hpp"
#include "weiqi_rules.hpp"
#include "legality.hpp"
#include "match.hpp"
#include "record.hpp"
#include "bots.hpp"
#include "oracle_check.hpp"
#include "service.hpp"
