"""CNN training and prediction over sensorgrid dataset containers.

Talks to the pipeline package only through its on-disk formats: reads
``manifest.json`` + ``samples.bin`` + ``labels.csv``, writes the predictions
CSV the ``sensorgrid evaluate`` subcommand consumes.
"""

__version__ = "0.1.0"
