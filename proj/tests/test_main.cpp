#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "qhgeo/parallel.hpp"

int main(int argc, char** argv) {
  qhgeo::configure_threads_from_env();
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
