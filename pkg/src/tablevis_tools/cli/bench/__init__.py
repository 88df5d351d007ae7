"""Pipeline runs, benchmark execution and reporting commands."""

#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
