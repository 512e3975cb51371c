//! ADER solver: placeholder during staged construction.
