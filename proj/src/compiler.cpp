#include "qraft/compiler.hpp"
