#pragma once

// Umbrella include.

#include "motionsync/align.hpp"
#include "motionsync/consistency.hpp"
#include "motionsync/cost_oracle.hpp"
#include "motionsync/dp.hpp"
#include "motionsync/features/frenet.hpp"
#include "motionsync/features/gram.hpp"
#include "motionsync/features/sphere.hpp"
#include "motionsync/features/srvt.hpp"
#include "motionsync/io.hpp"
#include "motionsync/keyframes.hpp"
#include "motionsync/motion.hpp"
#include "motionsync/plot.hpp"
#include "motionsync/synth.hpp"
#include "motionsync/warp.hpp"
