#pragma once

#define SPIX_VERSION "0.1.0"
