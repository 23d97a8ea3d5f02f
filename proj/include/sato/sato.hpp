#pragma once

#include "sato/errors.hpp"
#include "sato/coeffs.hpp"
#include "sato/series.hpp"
#include "sato/matrix.hpp"
#include "sato/diffops.hpp"
#include "sato/connections.hpp"
#include "sato/levelt_turrittin.hpp"
#include "sato/quivers.hpp"
#include "sato/fourier.hpp"
#include "sato/virasoro.hpp"
#include "sato/report.hpp"
#include "sato/commands.hpp"
