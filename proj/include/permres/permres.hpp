#pragma once

#include "permres/prime_field.hpp"
#include "permres/matrix.hpp"
#include "permres/module.hpp"
#include "permres/distance.hpp"
#include "permres/resolution.hpp"
#include "permres/oracle.hpp"
#include "permres/verify.hpp"
#include "permres/json_io.hpp"
