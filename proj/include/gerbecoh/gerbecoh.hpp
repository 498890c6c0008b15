#pragma once

#include "gerbecoh/integer.hpp"
#include "gerbecoh/matrix.hpp"
#include "gerbecoh/normal_form.hpp"
#include "gerbecoh/lattice.hpp"
#include "gerbecoh/abelian.hpp"
#include "gerbecoh/group.hpp"
#include "gerbecoh/gamma_module.hpp"
#include "gerbecoh/tate.hpp"
#include "gerbecoh/certify.hpp"
#include "gerbecoh/gerbe.hpp"
#include "gerbecoh/duality.hpp"
#include "gerbecoh/zembed.hpp"
