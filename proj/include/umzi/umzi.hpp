#pragma once

#include "analysis.hpp"
#include "channel.hpp"
#include "cli.hpp"
#include "config.hpp"
#include "error.hpp"
#include "keyrate.hpp"
#include "report.hpp"
#include "source_model.hpp"
