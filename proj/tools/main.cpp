#include "cli.hpp"

int
main(int argc, char** argv)
{
  return hcr::cli::run(argc, argv);
}
