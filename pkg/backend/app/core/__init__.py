# Settings, errors and logging bootstrap
