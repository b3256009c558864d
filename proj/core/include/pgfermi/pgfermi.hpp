#pragma once

#include "pgfermi/coherent.hpp"
#include "pgfermi/error.hpp"
#include "pgfermi/fermion.hpp"
#include "pgfermi/finite_level.hpp"
#include "pgfermi/numerics.hpp"
#include "pgfermi/paragrassmann.hpp"
#include "pgfermi/pseudofermion.hpp"
#include "pgfermi/report.hpp"
