import setuptools

from pyEntangle import __release__

setuptools.setup(
    name='pyEntangle',
    version=__release__,
    packages=['pyEntangle', 'pyEntangle.internal', 'pyEntangle.core'],
    license='MIT',
    description='State-vector simulation of Grover search and the HHL linear solver, with the three-qubit '
                'entanglement measures (three-tangle, pi-tangle, concurrence) tracked at every circuit stage',
    long_description='Documentation is built from ``docs/`` with Sphinx.',
    install_requires=['numpy', 'scipy', 'pandas>=1.5'],
    tests_require=['coverage', 'pytest', 'pytest-cov'],
    entry_points={'console_scripts': ['pyentangle=pyEntangle.cli:main']},
    keywords='quantum entanglement three-tangle grover hhl simulation',
    classifiers=[
        'Development Status :: 4 - Beta',

        'Intended Audience :: Science/Research',

        'Topic :: Scientific/Engineering :: Physics',

        'License :: OSI Approved :: MIT License',

        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Natural Language :: English'
    ]
)
