// Umbrella header.
#pragma once

#include "collide_sic/channel.hpp"
#include "collide_sic/construction.hpp"
#include "collide_sic/correlation.hpp"
#include "collide_sic/erasure.hpp"
#include "collide_sic/error.hpp"
#include "collide_sic/gf256.hpp"
#include "collide_sic/identify.hpp"
#include "collide_sic/io.hpp"
#include "collide_sic/parallel.hpp"
#include "collide_sic/plan.hpp"
#include "collide_sic/rational.hpp"
#include "collide_sic/sequence.hpp"
#include "collide_sic/sic.hpp"
#include "collide_sic/verify.hpp"
