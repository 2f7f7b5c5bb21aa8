#pragma once

#include "flexlab/classifier.hpp"
#include "flexlab/errors.hpp"
#include "flexlab/framework.hpp"
#include "flexlab/geometry.hpp"
#include "flexlab/kinematics/export.hpp"
#include "flexlab/kinematics/generators.hpp"
#include "flexlab/kinematics/motion.hpp"
#include "flexlab/kinematics/rigidity.hpp"
#include "flexlab/kinematics/trace.hpp"
#include "flexlab/poly/verify.hpp"
