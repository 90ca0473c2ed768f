#pragma once

#include "blockenc.hpp"
#include "hardness.hpp"
#include "harness.hpp"
#include "hilbert.hpp"
#include "locc.hpp"
#include "properties.hpp"
#include "random.hpp"
#include "schur.hpp"
#include "serialize.hpp"
#include "symrep.hpp"
#include "testers.hpp"
#include "twirl.hpp"
#include "young.hpp"
