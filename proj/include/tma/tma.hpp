#pragma once

#include "tma/analyzer/analyzer.hpp"
#include "tma/analyzer/report.hpp"
#include "tma/concrete/explore.hpp"
#include "tma/domains/gen_kill.hpp"
#include "tma/domains/interval.hpp"
#include "tma/harness/complexity.hpp"
#include "tma/harness/generator.hpp"
#include "tma/harness/soundness.hpp"
#include "tma/lang/control.hpp"
#include "tma/lang/parser.hpp"
#include "tma/lang/printer.hpp"
